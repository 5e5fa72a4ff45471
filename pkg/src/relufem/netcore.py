"""Core data structures and evaluators for plain and skip-connected ReLU networks.

Two network families are supported:

* :class:`MlpNetwork` -- a plain chain of affine maps with componentwise
  ``max(0, .)`` between them and a scalar affine readout.
* :class:`SkipNetwork` -- a variant in which every hidden layer re-reads the
  raw input alongside the previous layer's activations, and the readout
  collects the raw input together with *all* hidden activations.

Networks are immutable values: weight arrays are copied on construction and
marked read-only.  Evaluation is a pure function and safe to call
concurrently.  Every builder in this package emits exact dyadic weights, so
evaluation in binary64 is exact up to the usual accumulation effects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AffineMap",
    "MlpNetwork",
    "NetworkFormatError",
    "SkipLayer",
    "SkipNetwork",
    "depth",
    "deserialize",
    "eval_mlp",
    "eval_skip",
    "net_from_dict",
    "net_to_dict",
    "random_skip_network",
    "serialize",
    "widths",
]


class NetworkFormatError(ValueError):
    """A network document could not be parsed.

    ``location`` points at the offending element using a JSON-path-like
    string, e.g. ``layers[2].weights``.
    """

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location


def _frozen(a, dtype=np.float64) -> np.ndarray:
    out = np.array(a, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass
class AffineMap:
    """A dense weight matrix plus bias vector; the atom of all networks.

    ``weights`` has shape (out_dim, in_dim); ``bias`` has shape (out_dim,).
    """

    weights: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        self.weights = _frozen(self.weights)
        self.bias = _frozen(self.bias)
        if self.weights.ndim != 2:
            raise ValueError(f"weights must be a matrix, got ndim={self.weights.ndim}")
        if self.bias.ndim != 1:
            raise ValueError(f"bias must be a vector, got ndim={self.bias.ndim}")
        if self.bias.shape[0] != self.weights.shape[0]:
            raise ValueError(
                f"bias length {self.bias.shape[0]} != weight row count {self.weights.shape[0]}"
            )
        if not (np.isfinite(self.weights).all() and np.isfinite(self.bias).all()):
            raise ValueError("affine map entries must all be finite")

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Apply to a batch of rows: (n, in_dim) -> (n, out_dim)."""
        return x @ self.weights.T + self.bias


@dataclass
class SkipLayer:
    """One hidden layer of a :class:`SkipNetwork`.

    The layer's affine map acts on the concatenation ``[x, f_prev]`` and is
    stored as two blocks so structural operations can splice them without
    index arithmetic: ``w_input`` (width x input_dim) acts on the raw input,
    ``w_carry`` (width x prev_width) on the previous layer's activations.
    The first layer has ``w_carry`` with zero columns.
    """

    w_input: np.ndarray
    w_carry: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        self.w_input = _frozen(self.w_input)
        self.w_carry = _frozen(self.w_carry)
        self.bias = _frozen(self.bias)
        if self.w_input.ndim != 2 or self.w_carry.ndim != 2 or self.bias.ndim != 1:
            raise ValueError("skip layer blocks must be (matrix, matrix, vector)")
        n = self.bias.shape[0]
        if self.w_input.shape[0] != n or self.w_carry.shape[0] != n:
            raise ValueError(
                f"inconsistent row counts: w_input {self.w_input.shape[0]}, "
                f"w_carry {self.w_carry.shape[0]}, bias {n}"
            )
        if not (
            np.isfinite(self.w_input).all()
            and np.isfinite(self.w_carry).all()
            and np.isfinite(self.bias).all()
        ):
            raise ValueError("skip layer entries must all be finite")

    @property
    def width(self) -> int:
        return self.bias.shape[0]


@dataclass
class MlpNetwork:
    """Plain ReLU chain: scalar readout after L hidden layers."""

    input_dim: int
    hidden: list[AffineMap]
    output: AffineMap

    def __post_init__(self):
        if self.input_dim < 1:
            raise ValueError("input_dim must be positive")
        prev = self.input_dim
        for k, layer in enumerate(self.hidden):
            if layer.in_dim != prev:
                raise ValueError(
                    f"hidden[{k}] expects input dim {layer.in_dim}, previous width is {prev}"
                )
            prev = layer.out_dim
        if self.output.in_dim != prev:
            raise ValueError(
                f"output expects input dim {self.output.in_dim}, last hidden width is {prev}"
            )
        if self.output.out_dim != 1:
            raise ValueError("networks are scalar-valued: output dim must be 1")

    @property
    def widths(self) -> list[int]:
        return [layer.out_dim for layer in self.hidden]

    @property
    def depth(self) -> int:
        return len(self.hidden)


@dataclass
class SkipNetwork:
    """ReLU network with per-layer raw-input injection and all-layer readout.

    The readout acts on ``[x, f_1, ..., f_L]`` and therefore has input
    dimension ``input_dim + sum(widths)``.
    """

    input_dim: int
    layers: list[SkipLayer]
    output: AffineMap

    def __post_init__(self):
        if self.input_dim < 1:
            raise ValueError("input_dim must be positive")
        prev = 0
        for k, layer in enumerate(self.layers):
            if layer.w_input.shape[1] != self.input_dim:
                raise ValueError(
                    f"layers[{k}] input block has {layer.w_input.shape[1]} columns, "
                    f"expected input_dim {self.input_dim}"
                )
            if layer.w_carry.shape[1] != prev:
                raise ValueError(
                    f"layers[{k}] carry block has {layer.w_carry.shape[1]} columns, "
                    f"expected previous width {prev}"
                )
            prev = layer.width
        total = self.input_dim + sum(layer.width for layer in self.layers)
        if self.output.in_dim != total:
            raise ValueError(
                f"output expects input dim {self.output.in_dim}, "
                f"but input_dim + total hidden width is {total}"
            )
        if self.output.out_dim != 1:
            raise ValueError("networks are scalar-valued: output dim must be 1")

    @property
    def widths(self) -> list[int]:
        return [layer.width for layer in self.layers]

    @property
    def depth(self) -> int:
        return len(self.layers)


Network = MlpNetwork | SkipNetwork


def widths(net: Network) -> list[int]:
    """Hidden layer widths n_1..n_L."""
    return net.widths


def depth(net: Network) -> int:
    """Number of hidden layers L."""
    return net.depth


def _as_batch(net: Network, x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != net.input_dim:
        raise ValueError(
            f"point dimension mismatch: network expects {net.input_dim}, got shape {np.shape(x)}"
        )
    return arr, single


def eval_mlp(net: MlpNetwork, x):
    """Evaluate a plain network at a point (1-D x -> float) or batch (2-D -> 1-D array)."""
    X, single = _as_batch(net, x)
    a = X
    for layer in net.hidden:
        a = np.maximum(layer.apply(a), 0.0)
    out = net.output.apply(a)[:, 0]
    return float(out[0]) if single else out


def eval_skip(net: SkipNetwork, x):
    """Evaluate a skip network at a point or batch.

    Implements the recursion f_1 = relu(W1_x x + b1),
    f_l = relu(Wl_x x + Wl_f f_{l-1} + bl), with the readout applied to
    [x, f_1, ..., f_L].
    """
    X, single = _as_batch(net, x)
    parts = [X]
    prev = None
    for layer in net.layers:
        z = X @ layer.w_input.T + layer.bias
        if layer.w_carry.shape[1]:
            z = z + prev @ layer.w_carry.T
        prev = np.maximum(z, 0.0)
        parts.append(prev)
    stacked = parts[0] if len(parts) == 1 else np.concatenate(parts, axis=1)
    out = net.output.apply(stacked)[:, 0]
    return float(out[0]) if single else out


def evaluate(net: Network, x):
    """Type-dispatching evaluator used by analysis code."""
    if isinstance(net, MlpNetwork):
        return eval_mlp(net, x)
    if isinstance(net, SkipNetwork):
        return eval_skip(net, x)
    raise TypeError(f"not a network: {type(net).__name__}")


def random_skip_network(seed: int, input_dim: int, layer_widths: list[int]) -> SkipNetwork:
    """Deterministic random skip network with entries uniform in [-1, 1].

    Test fixture for the skip-to-plain conversion; same seed gives identical
    weights.
    """
    if not layer_widths:
        raise ValueError("layer_widths must be non-empty")
    rng = np.random.default_rng(seed)
    layers = []
    prev = 0
    for n in layer_widths:
        layers.append(
            SkipLayer(
                w_input=rng.uniform(-1.0, 1.0, size=(n, input_dim)),
                w_carry=rng.uniform(-1.0, 1.0, size=(n, prev)),
                bias=rng.uniform(-1.0, 1.0, size=n),
            )
        )
        prev = n
    total = input_dim + sum(layer_widths)
    output = AffineMap(rng.uniform(-1.0, 1.0, size=(1, total)), rng.uniform(-1.0, 1.0, size=1))
    return SkipNetwork(input_dim, layers, output)


# -- document format ---------------------------------------------------------
#
# { "kind": "mlp" | "skip",
#   "input_dim": d,
#   "layers": [ {"weights": [[...]], "bias": [...]} , ... ],
#   "output": {"weights": [[...]], "bias": [...]} }
#
# Skip layers additionally carry "input_block_cols": d, and their "weights"
# matrix is the concatenation [w_input | w_carry].  Floats are emitted with
# full round-trip precision, so serialize/deserialize is bit-exact.


def _require(cond: bool, message: str, location: str) -> None:
    if not cond:
        raise NetworkFormatError(message, location)


def _parse_matrix(doc, location: str) -> np.ndarray:
    _require(isinstance(doc, list) and doc, "expected a non-empty list of rows", location)
    ncols = None
    for r, row in enumerate(doc):
        _require(isinstance(row, list), "expected a list of numbers", f"{location}[{r}]")
        if ncols is None:
            ncols = len(row)
        _require(
            len(row) == ncols,
            f"row has {len(row)} entries, expected {ncols}",
            f"{location}[{r}]",
        )
        for c, v in enumerate(row):
            _require(
                isinstance(v, (int, float)) and not isinstance(v, bool),
                "expected a number",
                f"{location}[{r}][{c}]",
            )
    return np.asarray(doc, dtype=np.float64)


def _parse_vector(doc, location: str) -> np.ndarray:
    _require(isinstance(doc, list), "expected a list of numbers", location)
    for c, v in enumerate(doc):
        _require(
            isinstance(v, (int, float)) and not isinstance(v, bool),
            "expected a number",
            f"{location}[{c}]",
        )
    return np.asarray(doc, dtype=np.float64)


def _parse_affine(doc, location: str) -> AffineMap:
    _require(isinstance(doc, dict), "expected an object", location)
    _require("weights" in doc, "missing 'weights'", location)
    _require("bias" in doc, "missing 'bias'", location)
    w = _parse_matrix(doc["weights"], f"{location}.weights")
    b = _parse_vector(doc["bias"], f"{location}.bias")
    try:
        return AffineMap(w, b)
    except ValueError as exc:
        raise NetworkFormatError(str(exc), location) from exc


def net_to_dict(net: Network) -> dict:
    """Plain-data form of a network, matching the document format."""
    if isinstance(net, MlpNetwork):
        return {
            "kind": "mlp",
            "input_dim": net.input_dim,
            "layers": [
                {"weights": layer.weights.tolist(), "bias": layer.bias.tolist()}
                for layer in net.hidden
            ],
            "output": {
                "weights": net.output.weights.tolist(),
                "bias": net.output.bias.tolist(),
            },
        }
    if isinstance(net, SkipNetwork):
        return {
            "kind": "skip",
            "input_dim": net.input_dim,
            "layers": [
                {
                    "weights": np.hstack([layer.w_input, layer.w_carry]).tolist(),
                    "bias": layer.bias.tolist(),
                    "input_block_cols": net.input_dim,
                }
                for layer in net.layers
            ],
            "output": {
                "weights": net.output.weights.tolist(),
                "bias": net.output.bias.tolist(),
            },
        }
    raise TypeError(f"not a network: {type(net).__name__}")


def net_from_dict(doc: dict) -> Network:
    """Parse a plain-data network document; raises NetworkFormatError with position."""
    _require(isinstance(doc, dict), "expected an object", "$")
    kind = doc.get("kind")
    _require(kind in ("mlp", "skip"), f"unknown kind {kind!r}", "$.kind")
    d = doc.get("input_dim")
    _require(isinstance(d, int) and d >= 1, "input_dim must be a positive integer", "$.input_dim")
    raw_layers = doc.get("layers")
    _require(isinstance(raw_layers, list), "layers must be a list", "$.layers")
    output = _parse_affine(doc.get("output"), "$.output")
    if kind == "mlp":
        hidden = [_parse_affine(l, f"$.layers[{k}]") for k, l in enumerate(raw_layers)]
        try:
            return MlpNetwork(d, hidden, output)
        except ValueError as exc:
            raise NetworkFormatError(str(exc), "$") from exc
    layers = []
    prev = 0
    for k, l in enumerate(raw_layers):
        loc = f"$.layers[{k}]"
        _require(isinstance(l, dict), "expected an object", loc)
        block = l.get("input_block_cols", d)
        _require(block == d, f"input_block_cols {block} != input_dim {d}", f"{loc}.input_block_cols")
        w = _parse_matrix(l.get("weights"), f"{loc}.weights")
        b = _parse_vector(l.get("bias"), f"{loc}.bias")
        _require(
            w.shape[1] == d + prev,
            f"layer matrix has {w.shape[1]} columns, expected input_dim {d} + previous width {prev}",
            f"{loc}.weights",
        )
        try:
            layers.append(SkipLayer(w[:, :d], w[:, d:], b))
        except ValueError as exc:
            raise NetworkFormatError(str(exc), loc) from exc
        prev = layers[-1].width
    try:
        return SkipNetwork(d, layers, output)
    except ValueError as exc:
        raise NetworkFormatError(str(exc), "$") from exc


def serialize(net: Network) -> str:
    """JSON text for a network; floats carry full round-trip precision."""
    return json.dumps(net_to_dict(net), indent=1)


def deserialize(text: str | bytes) -> Network:
    """Parse JSON text into a network; raises NetworkFormatError with position."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"invalid JSON: {exc.msg}", f"offset {exc.pos}") from exc
    return net_from_dict(doc)
