"""Constructive builders: explicit ReLU networks with exact dyadic weights.

Everything here compiles a target function into a :mod:`relufem.netcore`
network whose weights are written down in closed form -- no training, no
fitting.  The sawtooth chain ``2*ReLU(t) - 4*ReLU(t - 1/2) + 2*ReLU(t - 1)``
is the single engine: composed with itself it halves the mesh per layer,
which yields uniform interpolants of x^2, products, monomials, polynomials,
and the two-hidden-layer representation of 2D finite element functions.

Structural operators on skip networks (addition, modified composition,
conversion to plain networks) follow the block-splicing constructions their
depth/width contracts come from.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .netcore import AffineMap, MlpNetwork, SkipLayer, SkipNetwork

__all__ = [
    "HatPlacement",
    "Monomial",
    "Polynomial",
    "build_fem2d",
    "build_g",
    "build_g_ell",
    "build_hat2d",
    "build_hat2d_unguarded",
    "build_monomial",
    "build_polynomial",
    "build_psi_ell",
    "build_relu1",
    "build_x2_hat",
    "build_xy_hat",
    "fem_to_placements",
    "net_add",
    "net_compose_modified",
    "pad_skip_to_width",
    "skip_to_mlp",
]

# g-expansion row: g(t) = 2*ReLU(t) - 4*ReLU(t - 1/2) + 2*ReLU(t - 1)
_G_ROW = np.array([2.0, -4.0, 2.0])
_G_BIAS = np.array([0.0, -0.5, -1.0])
# five-neuron expansion of the two-tooth sawtooth: sum a_i * ReLU(t - i/4)
_G2_ALPHA = np.array([4.0, -8.0, 8.0, -8.0, 4.0])
_G2_SHIFTS = np.array([0.0, -0.25, -0.5, -0.75, -1.0])


@dataclass(frozen=True)
class Monomial:
    """Product of coordinate powers; ``exponents[i]`` is the power of x_i."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))
        if len(self.exponents) < 1:
            raise ValueError("monomial needs at least one coordinate")
        if any(e < 0 for e in self.exponents):
            raise ValueError("exponents must be non-negative")
        if self.degree < 1:
            raise ValueError("monomial degree must be at least 1")

    @property
    def dim(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)


@dataclass
class Polynomial:
    """Sparse polynomial: exponent tuple -> coefficient.  Zero coefficients are dropped."""

    dim: int
    terms: dict[tuple[int, ...], float]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        clean: dict[tuple[int, ...], float] = {}
        for exps, coeff in self.terms.items():
            key = tuple(int(e) for e in exps)
            if len(key) != self.dim or any(e < 0 for e in key):
                raise ValueError(f"bad exponent vector {exps} for dim {self.dim}")
            c = clean.get(key, 0.0) + float(coeff)
            clean[key] = c
        self.terms = {k: v for k, v in clean.items() if v != 0.0}

    @property
    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    @classmethod
    def from_dict(cls, doc: dict) -> "Polynomial":
        """Parse the structured input format {dim, terms: [{exponents, coeff}]}."""
        terms: dict[tuple[int, ...], float] = {}
        for t in doc["terms"]:
            key = tuple(int(e) for e in t["exponents"])
            terms[key] = terms.get(key, 0.0) + float(t["coeff"])
        return cls(int(doc["dim"]), terms)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "terms": [
                {"exponents": list(k), "coeff": v} for k, v in sorted(self.terms.items())
            ],
        }

    def __call__(self, x) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(x, dtype=np.float64))
        out = np.zeros(pts.shape[0])
        for exps, coeff in self.terms.items():
            out += coeff * np.prod(pts ** np.asarray(exps), axis=1)
        return out


@dataclass
class HatPlacement:
    """One scaled, affinely placed copy of the reference hat function."""

    matrix: np.ndarray
    shift: np.ndarray
    coeff: float

    def __post_init__(self):
        self.matrix = np.array(self.matrix, dtype=np.float64)
        self.shift = np.array(self.shift, dtype=np.float64)
        self.coeff = float(self.coeff)
        if self.matrix.shape != (2, 2) or self.shift.shape != (2,):
            raise ValueError("placement map must be a 2x2 matrix plus 2-vector shift")
        if not (np.isfinite(self.matrix).all() and np.isfinite(self.shift).all()):
            raise ValueError("placement map entries must be finite")
        if abs(np.linalg.det(self.matrix)) < 1e-12:
            raise ValueError("singular placement map")


# -- 1D sawtooth machinery ----------------------------------------------------


def build_g() -> MlpNetwork:
    """The tent map 2*ReLU(x) - 4*ReLU(x - 1/2) + 2*ReLU(x - 1): peak 1 at 1/2, zero off [0, 1]."""
    hidden = [AffineMap(np.ones((3, 1)), _G_BIAS)]
    return MlpNetwork(1, hidden, AffineMap(_G_ROW[None, :], np.zeros(1)))


def build_g_ell(level: int) -> MlpNetwork:
    """level-fold self-composition of the tent map: 2**(level-1) teeth on [0, 1]."""
    if level < 1:
        raise ValueError("level must be >= 1")
    hidden = [AffineMap(np.ones((3, 1)), _G_BIAS)]
    for _ in range(level - 1):
        hidden.append(AffineMap(np.tile(_G_ROW, (3, 1)), _G_BIAS))
    return MlpNetwork(1, hidden, AffineMap(_G_ROW[None, :], np.zeros(1)))


def build_relu1() -> MlpNetwork:
    """Clamp to [0, 1]: ReLU(x) - ReLU(x - 1)."""
    hidden = [AffineMap(np.ones((2, 1)), np.array([0.0, -1.0]))]
    return MlpNetwork(1, hidden, AffineMap(np.array([[1.0, -1.0]]), np.zeros(1)))


def _build_shat(levels: int, input_dim: int, arg_row: np.ndarray, scale: float) -> SkipNetwork:
    """Skip network computing scale * shat_levels(arg_row . x).

    shat_L(t) = |t| - sum_{l=1}^{L-1} 4**-l * g_l(|t|): on [-1, 1] this is the
    uniform interpolant of t^2 at mesh 2**(1-L).  Width 3 throughout: layer 1
    holds the ReLU pair of the argument (plus one padding neuron), each later
    layer holds one g-expansion step.
    """
    row = np.asarray(arg_row, dtype=np.float64).reshape(1, -1)
    layers = [
        SkipLayer(
            np.vstack([row, -row, np.zeros_like(row)]),
            np.zeros((3, 0)),
            np.zeros(3),
        )
    ]
    if levels >= 2:
        layers.append(SkipLayer(np.zeros((3, input_dim)), np.tile([1.0, 1.0, 0.0], (3, 1)), _G_BIAS))
    for _ in range(levels - 2):
        layers.append(SkipLayer(np.zeros((3, input_dim)), np.tile(_G_ROW, (3, 1)), _G_BIAS))
    out = np.zeros(input_dim + 3 * levels)
    out[input_dim:input_dim + 3] = scale * np.array([1.0, 1.0, 0.0])
    for l in range(1, levels):
        start = input_dim + 3 * l
        out[start:start + 3] = -scale * 4.0 ** -l * _G_ROW
    return SkipNetwork(input_dim, layers, AffineMap(out[None, :], np.zeros(1)))


def build_x2_hat(levels: int) -> SkipNetwork:
    """Width-3 skip network matching x^2 on [-1, 1] with exact sup error 4**-levels.

    Equals |x| minus the telescoping sawtooth corrections, i.e. the uniform
    interpolant of x^2 at mesh 2**(1-levels) on [-1, 1], and |x| outside.
    """
    if levels < 1:
        raise ValueError("levels must be >= 1")
    return _build_shat(levels, 1, np.array([1.0]), 1.0)


def build_xy_hat(levels: int, bound: float = 1.0) -> SkipNetwork:
    """Width-3, depth-3*levels skip network matching x*y on [-bound, bound]^2.

    Three scaled square-approximator blocks stacked sequentially; the value is
    bound**2 times the level-(levels-2) interpolant of the product on the unit
    box, so the exact sup error is bound**2 * 2**(-2*(levels-1)) and the range
    never exceeds bound**2.  Vanishes identically on both axes.
    """
    if levels < 2:
        raise ValueError("levels must be >= 2")
    if not bound > 0:
        raise ValueError("bound must be positive")
    m = float(bound)
    s = 2.0 * m * m
    a = _build_shat(levels, 2, np.array([0.5 / m, 0.5 / m]), s)
    b = _build_shat(levels, 2, np.array([0.5 / m, 0.0]), -s)
    c = _build_shat(levels, 2, np.array([0.0, 0.5 / m]), -s)
    return net_add(net_add(a, b), c)


# -- structural operators ------------------------------------------------------


def _uniform_width(net: SkipNetwork) -> int | None:
    ws = set(net.widths)
    if len(ws) > 1:
        raise ValueError(f"layer widths are not uniform: {net.widths}")
    return ws.pop() if ws else None


def net_add(f: SkipNetwork, g: SkipNetwork) -> SkipNetwork:
    """Pointwise sum as one skip network of depth depth(f) + depth(g).

    g's first layer re-reads the raw input through the skip connection, so
    the two layer stacks simply concatenate; the readouts merge blockwise.
    Requires equal input dims and a common layer width.
    """
    if f.input_dim != g.input_dim:
        raise ValueError(f"input dim mismatch: {f.input_dim} vs {g.input_dim}")
    wf, wg = _uniform_width(f), _uniform_width(g)
    if wf is not None and wg is not None and wf != wg:
        raise ValueError(f"width mismatch: {wf} vs {wg}")
    d = f.input_dim
    layers = list(f.layers)
    if g.layers:
        first = g.layers[0]
        prev = f.widths[-1] if f.layers else 0
        layers.append(SkipLayer(first.w_input, np.zeros((first.width, prev)), first.bias))
        layers.extend(g.layers[1:])
    fw, gw = f.output.weights[0], g.output.weights[0]
    out = np.concatenate([fw[:d] + gw[:d], fw[d:], gw[d:]])
    bias = f.output.bias + g.output.bias
    return SkipNetwork(d, layers, AffineMap(out[None, :], bias))


def _split_output_blocks(net: SkipNetwork) -> tuple[np.ndarray, list[np.ndarray], float]:
    """Readout row split into (x part, per-layer parts, bias)."""
    row = net.output.weights[0]
    d = net.input_dim
    parts = []
    off = d
    for n in net.widths:
        parts.append(row[off:off + n])
        off += n
    return row[:d], parts, float(net.output.bias[0])


def _interval_affine(w: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    wp = np.maximum(w, 0.0)
    wn = np.minimum(w, 0.0)
    return wp @ lo + wn @ hi, wp @ hi + wn @ lo


def _skip_activation_bounds(net: SkipNetwork, lo: np.ndarray, hi: np.ndarray):
    """Interval bounds of every post-activation over the input box [lo, hi]."""
    bounds = []
    prev = None
    for layer in net.layers:
        zlo, zhi = _interval_affine(layer.w_input, lo, hi)
        if layer.w_carry.shape[1]:
            clo, chi = _interval_affine(layer.w_carry, prev[0], prev[1])
            zlo, zhi = zlo + clo, zhi + chi
        zlo, zhi = zlo + layer.bias, zhi + layer.bias
        prev = (np.maximum(zlo, 0.0), np.maximum(zhi, 0.0))
        bounds.append(prev)
    return bounds


def _as_box(input_dim: int, bounds) -> tuple[np.ndarray, np.ndarray]:
    if np.isscalar(bounds):
        b = float(bounds)
        if b <= 0:
            raise ValueError("bounds must be positive")
        return np.full(input_dim, -b), np.full(input_dim, b)
    lo, hi = (np.asarray(side, dtype=np.float64) for side in bounds)
    if lo.shape != (input_dim,) or hi.shape != (input_dim,) or np.any(lo >= hi):
        raise ValueError("bounds must be a positive scalar or a (lo, hi) pair of d-vectors")
    return lo, hi


def net_compose_modified(f2: SkipNetwork, f1: SkipNetwork, bounds=1.0) -> SkipNetwork:
    """Modified composition: the network computing f2(f1(x), x).

    f2 takes the composed value as its *first* coordinate followed by the raw
    input; f1 has uniform width N and f2 uniform width N + 1, and the result
    has depth depth(f1) + depth(f2) at width N + 1.

    When only f2's readout uses the composed coordinate the splice is exact
    everywhere.  When f2's hidden layers re-read it, the value must travel
    through ReLU channels, which can only hold non-negative quantities: the
    construction shifts each carried quantity by a constant certified via
    interval bounds over the box ``bounds`` (a scalar b meaning [-b, b]^d, or
    a (lo, hi) pair), so agreement with f2(f1(x), x) is guaranteed on that
    box.  Re-reads beyond f2's first layer additionally require a zero
    (padding) channel in f2 to host the carried value.
    """
    d = f1.input_dim
    if f2.input_dim != d + 1:
        raise ValueError(
            f"composition contract violated: f2 input dim {f2.input_dim} != f1 input dim {d} + 1"
        )
    n1 = _uniform_width(f1)
    n2 = _uniform_width(f2)
    if n1 is not None and n2 is not None and n2 != n1 + 1:
        raise ValueError(f"composition contract violated: f2 width {n2} != f1 width {n1} + 1")

    f2_out_x, f2_out_blocks, f2_out_bias = _split_output_blocks(f2)
    alpha_out = f2_out_x[0]
    f2x_rest = f2_out_x[1:]

    if f1.depth == 0:
        # f1 is a plain affine readout of x: substitute it symbolically.
        w0 = f1.output.weights[0, :d]
        b0 = float(f1.output.bias[0])
        layers = []
        for layer in f2.layers:
            a = layer.w_input[:, 0]
            layers.append(
                SkipLayer(
                    layer.w_input[:, 1:] + np.outer(a, w0),
                    layer.w_carry,
                    layer.bias + a * b0,
                )
            )
        out = np.concatenate([f2x_rest + alpha_out * w0, *f2_out_blocks])
        return SkipNetwork(d, layers, AffineMap(out[None, :], np.array([f2_out_bias + alpha_out * b0])))

    f1_out_x, f1_out_blocks, f1_out_bias = _split_output_blocks(f1)
    width1 = f1.widths[-1]
    ext = width1 + 1  # f1's layers gain one extra channel

    hidden_alphas = [layer.w_input[:, 0] for layer in f2.layers]
    reads_hidden = any(np.any(a != 0.0) for a in hidden_alphas)
    reads_deep = any(np.any(a != 0.0) for a in hidden_alphas[1:])

    lo, hi = _as_box(d, bounds)
    kappa1 = 0.0
    if reads_hidden:
        # Prefix sums of f1's readout must be recoverable at f2's first layer.
        acts = _skip_activation_bounds(f1, lo, hi)
        qlo, qhi = _interval_affine(f1.output.weights[:, :d], lo, hi)
        qlo, qhi = float(qlo[0] + f1_out_bias), float(qhi[0] + f1_out_bias)
        min_lo = qlo
        for k in range(len(f1.layers) - 1):
            tlo, thi = _interval_affine(f1_out_blocks[k][None, :], *acts[k])
            qlo, qhi = qlo + float(tlo[0]), qhi + float(thi[0])
            min_lo = min(min_lo, qlo)
        kappa1 = 1.0 + max(0.0, -min_lo)

    # f1 part: original layers plus the extra channel.
    layers = []
    for k, layer in enumerate(f1.layers):
        n = layer.width
        prev_cols = layer.w_carry.shape[1] + (1 if k > 0 else 0)
        w_in = np.zeros((n + 1, d))
        w_ca = np.zeros((n + 1, prev_cols))
        bias = np.zeros(n + 1)
        w_in[:n] = layer.w_input
        w_ca[:n, :layer.w_carry.shape[1]] = layer.w_carry
        bias[:n] = layer.bias
        if reads_hidden:
            if k == 0:
                w_in[n] = f1.output.weights[0, :d]
                bias[n] = f1_out_bias + kappa1
            else:
                w_ca[n, :layer.w_carry.shape[1]] = f1_out_blocks[k - 1]
                w_ca[n, -1] = 1.0
        layers.append(SkipLayer(w_in, w_ca, bias))

    # Row over f1's extended last layer reconstructing x0 = f1(x) (minus the shift).
    x0_row = np.zeros(ext)
    x0_row[:width1] = f1_out_blocks[-1]
    x0_row[width1] = 1.0

    spare = None
    kappa2 = 0.0
    if reads_deep:
        n2w = f2.widths[0]
        candidates = []
        for c in range(n2w):
            unused = all(
                not np.any(layer.w_input[c]) and not np.any(layer.w_carry[c]) and layer.bias[c] == 0.0
                for layer in f2.layers
            )
            unused = unused and all(
                not np.any(layer.w_carry[:, c]) for layer in f2.layers[1:]
            )
            unused = unused and all(not block[c] for block in f2_out_blocks)
            if unused:
                candidates.append(c)
        if not candidates:
            raise ValueError(
                "composition contract violated: f2 re-reads the composed coordinate "
                "beyond its first layer and has no zero channel to carry it"
            )
        spare = candidates[0]
        acts = _skip_activation_bounds(f1, lo, hi)
        vlo, vhi = _interval_affine(f1.output.weights[:, :d], lo, hi)
        vlo = float(vlo[0] + f1_out_bias)
        for k in range(len(f1.layers)):
            tlo, _ = _interval_affine(f1_out_blocks[k][None, :], *acts[k])
            vlo += float(tlo[0])
        kappa2 = 1.0 + max(0.0, -vlo)

    # f2 part.
    last_read = max((k for k, a in enumerate(hidden_alphas) if np.any(a != 0.0)), default=-1)
    for k, layer in enumerate(f2.layers):
        a = hidden_alphas[k]
        w_in = np.array(layer.w_input[:, 1:])
        bias = np.array(layer.bias)
        if k == 0:
            w_ca = np.outer(a, x0_row)
            bias = bias - a * kappa1
            if spare is not None and last_read >= 1:
                w_ca[spare] = x0_row
                bias[spare] = kappa2 - kappa1
        else:
            w_ca = np.array(layer.w_carry)
            if np.any(a != 0.0):
                w_ca[:, spare] += a
                bias = bias - a * kappa2
            if spare is not None and k < last_read:
                w_ca[spare, spare] = 1.0
        layers.append(SkipLayer(w_in, w_ca, bias))

    # The readout sees every layer, so the composed coordinate's contribution
    # expands through f1's readout directly: exact everywhere, no carry.
    out_parts = [f2x_rest + alpha_out * f1_out_x]
    for block in f1_out_blocks:
        col = np.zeros(block.size + 1)
        col[:block.size] = alpha_out * block
        out_parts.append(col)
    out_parts.extend(f2_out_blocks)
    out = np.concatenate(out_parts)
    bias_out = f2_out_bias + alpha_out * f1_out_bias
    return SkipNetwork(d, layers, AffineMap(out[None, :], np.array([bias_out])))


def skip_to_mlp(net: SkipNetwork) -> MlpNetwork:
    """Plain network of identical depth and pointwise-equal output.

    Each converted layer carries the original activations plus ReLU pairs of
    +-x and +-(running readout partial sum), so every width grows by exactly
    2 * (input_dim + 1).  Exact everywhere, no domain restriction.
    """
    d = net.input_dim
    if net.depth == 0:
        raise ValueError("cannot convert a network with no hidden layers")
    out_x, out_blocks, out_bias = _split_output_blocks(net)
    eye = np.eye(d)
    first = net.layers[0]
    w1 = np.vstack([first.w_input, eye, -eye, out_x[None, :], -out_x[None, :]])
    b1 = np.concatenate([first.bias, np.zeros(2 * d), [out_bias, -out_bias]])
    hidden = [AffineMap(w1, b1)]
    for k in range(1, net.depth):
        layer = net.layers[k]
        n_prev = net.widths[k - 1]
        n = layer.width
        prev_total = n_prev + 2 * d + 2
        w = np.zeros((n + 2 * d + 2, prev_total))
        b = np.zeros(n + 2 * d + 2)
        w[:n, :n_prev] = layer.w_carry
        w[:n, n_prev:n_prev + d] = layer.w_input
        w[:n, n_prev + d:n_prev + 2 * d] = -layer.w_input
        b[:n] = layer.bias
        w[n:n + d, n_prev:n_prev + d] = eye
        w[n:n + d, n_prev + d:n_prev + 2 * d] = -eye
        w[n + d:n + 2 * d, n_prev:n_prev + d] = -eye
        w[n + d:n + 2 * d, n_prev + d:n_prev + 2 * d] = eye
        srow = np.zeros(prev_total)
        srow[:n_prev] = out_blocks[k - 1]
        srow[n_prev + 2 * d] = 1.0
        srow[n_prev + 2 * d + 1] = -1.0
        w[n + 2 * d] = srow
        w[n + 2 * d + 1] = -srow
        hidden.append(AffineMap(w, b))
    n_last = net.widths[-1]
    wout = np.zeros(n_last + 2 * d + 2)
    wout[:n_last] = out_blocks[-1]
    wout[n_last + 2 * d] = 1.0
    wout[n_last + 2 * d + 1] = -1.0
    return MlpNetwork(d, hidden, AffineMap(wout[None, :], np.zeros(1)))


def pad_skip_to_width(net: SkipNetwork, width: int) -> SkipNetwork:
    """Pad every hidden layer with zero-weight neurons up to ``width``."""
    if any(n > width for n in net.widths):
        raise ValueError(f"cannot pad widths {net.widths} down to {width}")
    d = net.input_dim
    layers = []
    prev_old = 0
    for k, layer in enumerate(net.layers):
        n = layer.width
        prev_cols = 0 if k == 0 else width
        w_in = np.zeros((width, d))
        w_ca = np.zeros((width, prev_cols))
        bias = np.zeros(width)
        w_in[:n] = layer.w_input
        w_ca[:n, :prev_old] = layer.w_carry
        bias[:n] = layer.bias
        layers.append(SkipLayer(w_in, w_ca, bias))
        prev_old = n
    out_x, out_blocks, out_bias = _split_output_blocks(net)
    out = np.concatenate([out_x] + [np.pad(b, (0, width - b.size)) for b in out_blocks])
    return SkipNetwork(d, layers, AffineMap(out[None, :], np.array([out_bias])))


# -- monomials and polynomials -------------------------------------------------


def _peel_order(exponents: tuple[int, ...]) -> tuple[list[int], int]:
    """Coordinates multiplied per stage, innermost first, plus the base coordinate."""
    k = list(exponents)
    peels = []
    while sum(k) > 1:
        u = next(i for i, e in enumerate(k) if e > 0)
        peels.append(u)
        k[u] -= 1
    base = next(i for i, e in enumerate(k) if e > 0)
    return list(reversed(peels)), base


def build_monomial(k, levels: int) -> SkipNetwork:
    """Skip network matching the monomial x^k on [-1, 1]^d.

    Degree-1 monomials collapse to a plain affine readout (depth 0).  For
    degree p >= 2 the network chains p - 1 product stages of depth 3*levels
    each, peeling exponents in ascending coordinate order; the sampled error
    on the unit box is at most (p - 1) * 2**(-2*(levels - 1)) and the value
    never leaves [-1, 1].

    Width is 4 for p <= 3.  For p >= 4 the interior stages must carry both a
    running value and the next stage's argument through ReLU channels at the
    same depths, which takes one extra channel: those networks have width 5.
    """
    mono = k if isinstance(k, Monomial) else Monomial(tuple(k))
    d = mono.dim
    p = mono.degree
    if p == 1:
        row = np.zeros((1, d))
        row[0, mono.exponents.index(1)] = 1.0
        return SkipNetwork(d, [], AffineMap(row, np.zeros(1)))
    if levels < 2:
        raise ValueError("levels must be >= 2")

    stage_coords, base = _peel_order(mono.exponents)
    n_stages = p - 1
    target_width = 4 if p <= 3 else 5

    layers: list[list[np.ndarray]] = []  # mutable [w_input, w_carry, bias]
    value_terms: list[tuple[int, np.ndarray]] = []  # for the final readout
    v_source = ("x", base)  # previous stage value: raw coordinate or layer affine

    corrections = [2.0 * 4.0 ** -j for j in range(1, levels)]

    for t in range(n_stages):
        u = stage_coords[t]
        has_carry = v_source[0] == "layer"
        has_accum = t < n_stages - 1
        carry_ch = 3 if has_carry else None
        accum_ch = (4 if has_carry else 3) if has_accum else None

        base_idx = len(layers)
        prev_cols = target_width if layers else 0

        def new_layer():
            layers.append(
                [
                    np.zeros((target_width, d)),
                    np.zeros((target_width, target_width if layers else 0)),
                    np.zeros(target_width),
                ]
            )
            return layers[-1]

        u_row = np.zeros(d)
        u_row[u] = 1.0

        # argument rows for the first layer of each block, as (w_x, w_prev, bias)
        if has_carry:
            c_row, vx_row, v_const = v_source[1]
        else:
            vx_row = np.zeros(d)
            vx_row[v_source[1]] = 1.0
            c_row, v_const = np.zeros(prev_cols), 0.0

        stage_terms: list[tuple[int, np.ndarray]] = []

        def emit_block(sign: float, sx: np.ndarray, sprev: np.ndarray, sconst: float, v_from_carry: bool):
            """One shat block: first layer holds the ReLU pair of s, then the g-chain."""
            first = new_layer()
            if v_from_carry:
                # s = v / 2 with v = carry - 1
                first[1][0, carry_ch] = 0.5
                first[1][1, carry_ch] = -0.5
                first[2][0] = -0.5
                first[2][1] = 0.5
            else:
                first[0][0], first[0][1] = sx, -sx
                first[1][0, :sprev.size], first[1][1, :sprev.size] = sprev, -sprev
                first[2][0], first[2][1] = sconst, -sconst
            row = np.zeros(target_width)
            row[0] = row[1] = sign * 2.0
            stage_terms.append((len(layers) - 1, row))
            for j in range(1, levels):
                chain = new_layer()
                arg = np.array([1.0, 1.0, 0.0]) if j == 1 else _G_ROW
                chain[1][0, :3] = chain[1][1, :3] = chain[1][2, :3] = arg
                chain[2][:3] = _G_BIAS
                row = np.zeros(target_width)
                row[:3] = -sign * corrections[j - 1] * _G_ROW
                stage_terms.append((len(layers) - 1, row))

        # block A: s = (u + v)/2, read from the previous layer / raw input
        emit_block(1.0, (u_row + vx_row) / 2.0, c_row / 2.0, v_const / 2.0, v_from_carry=False)
        # block C: s = v/2, read from the in-stage carry (or raw coordinate)
        if has_carry:
            emit_block(-1.0, np.zeros(d), np.zeros(0), 0.0, v_from_carry=True)
        else:
            emit_block(-1.0, vx_row / 2.0, np.zeros(0), 0.0, v_from_carry=False)
        # block B: s = u/2, raw coordinate
        emit_block(-1.0, u_row / 2.0, np.zeros(0), 0.0, v_from_carry=False)

        if has_carry:
            # carry v (shifted into ReLU range: |v| <= 1 on the unit box)
            first = layers[base_idx]
            first[0][carry_ch] = vx_row
            first[1][carry_ch, :c_row.size] = c_row
            first[2][carry_ch] = v_const + 1.0
            for q in range(1, levels):  # alive until block C consumes it
                layers[base_idx + q][1][carry_ch, carry_ch] = 1.0

        if has_accum:
            # Running stage value, shifted to stay non-negative on the unit
            # box.  Every machinery channel lies in [0, 1] there, so the sum
            # of a term row's negative coefficients bounds its value below.
            lo = 0.0
            run = 0.0
            by_layer = {idx: row for idx, row in stage_terms}
            for idx in sorted(by_layer):
                run += float(np.minimum(by_layer[idx], 0.0).sum())
                lo = min(lo, run)
            kappa = 1.0 - lo
            for q in range(1, 3 * levels):
                lay = layers[base_idx + q]
                lay[1][accum_ch, accum_ch] = 1.0
                prev_idx = base_idx + q - 1
                if prev_idx in by_layer:
                    lay[1][accum_ch, :] += by_layer[prev_idx]
                if q == 1:
                    lay[2][accum_ch] = kappa
            last_idx = base_idx + 3 * levels - 1
            v_row = np.zeros(target_width)
            v_row[accum_ch] = 1.0
            if last_idx in by_layer:
                v_row = v_row + by_layer[last_idx]
            v_source = ("layer", (v_row, np.zeros(d), -kappa))
        else:
            value_terms = stage_terms

    out = np.zeros(d + target_width * len(layers))
    for idx, row in value_terms:
        start = d + target_width * idx
        out[start:start + target_width] += row
    built = [SkipLayer(w_in, w_ca, bias) for w_in, w_ca, bias in layers]
    return SkipNetwork(d, built, AffineMap(out[None, :], np.zeros(1)))


def build_polynomial(poly: Polynomial, levels: int) -> SkipNetwork:
    """Sum of scaled monomial networks; affine terms live in the readout.

    The sampled error on the unit box is at most
    (degree - 1) * 2**(-2*(levels - 1)) * sum(|coefficients|); constant and
    degree-1 terms are represented exactly.
    """
    if not poly.terms:
        raise ValueError("polynomial has no terms")
    d = poly.dim
    affine_row = np.zeros(d)
    affine_const = 0.0
    nets = []
    for exps, coeff in sorted(poly.terms.items()):
        p = sum(exps)
        if p == 0:
            affine_const += coeff
        elif p == 1:
            affine_row[exps.index(1)] += coeff
        else:
            mono = build_monomial(Monomial(exps), levels)
            nets.append(
                SkipNetwork(
                    d,
                    mono.layers,
                    AffineMap(coeff * mono.output.weights, coeff * mono.output.bias),
                )
            )
    if not nets:
        return SkipNetwork(d, [], AffineMap(affine_row[None, :], np.array([affine_const])))
    width = max(max(n.widths) for n in nets)
    total = nets[0] if max(nets[0].widths) == width else pad_skip_to_width(nets[0], width)
    for n in nets[1:]:
        total = net_add(total, pad_skip_to_width(n, width))
    out = np.array(total.output.weights)
    out[0, :d] += affine_row
    return SkipNetwork(d, total.layers, AffineMap(out, total.output.bias + affine_const))


# -- 2D constructions ----------------------------------------------------------


def build_psi_ell(level: int) -> MlpNetwork:
    """Plain network for the level-`level` product detail on [-1, 1]^2.

    Three sawtooth chains run block-diagonally on |x|/2, |y|/2 and |x+y|/2;
    depth level + 2, width at most 9.  Matches the mesh-oracle detail
    function psi_ref(level) on the unit box.
    """
    if level < 1:
        raise ValueError("level must be >= 1")
    w1 = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0], [1.0, 1.0], [-1.0, -1.0]])
    hidden = [AffineMap(w1, np.zeros(6))]
    w2 = np.zeros((9, 6))
    b2 = np.zeros(9)
    for chain in range(3):
        w2[3 * chain:3 * chain + 3, 2 * chain] = 0.5
        w2[3 * chain:3 * chain + 3, 2 * chain + 1] = 0.5
        b2[3 * chain:3 * chain + 3] = _G_BIAS
    hidden.append(AffineMap(w2, b2))
    for _ in range(level):
        w = np.zeros((9, 9))
        b = np.zeros(9)
        for chain in range(3):
            w[3 * chain:3 * chain + 3, 3 * chain:3 * chain + 3] = np.tile(_G_ROW, (3, 1))
            b[3 * chain:3 * chain + 3] = _G_BIAS
        hidden.append(AffineMap(w, b))
    scale = 2.0 * 4.0 ** -(level + 1)
    out = scale * np.concatenate([_G_ROW, _G_ROW, -_G_ROW])
    return MlpNetwork(2, hidden, AffineMap(out[None, :], np.zeros(1)))


def _hat_layer2(rx_row: np.ndarray, ry_row: np.ndarray, n_prev: int) -> tuple[np.ndarray, np.ndarray]:
    """Fifteen neurons: the 5-term sawtooth expansions of rx/2, ry/2 and (rx+ry)/2."""
    w = np.zeros((15, n_prev))
    b = np.zeros(15)
    for chain, arg in enumerate((rx_row, ry_row, rx_row + ry_row)):
        for i in range(5):
            w[5 * chain + i] = arg / 2.0
            b[5 * chain + i] = _G2_SHIFTS[i]
    return w, b


_HAT_OUT = 0.5 * np.concatenate([_G2_ALPHA, _G2_ALPHA, -_G2_ALPHA])


def build_hat2d() -> MlpNetwork:
    """Two-hidden-layer network equal to the reference hat on all of R^2.

    Layer 1 clamps each coordinate into [0, 1] via ReLU pairs; layer 2 holds
    three 5-neuron sawtooth expansions (15 neurons); the readout combines
    them with weights (1, 1, -1)/2.  The clamping is what makes the formula
    globally valid: without it the value at (3/2, 3/2) is nonzero.
    """
    w1 = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 1.0]])
    b1 = np.array([0.0, -1.0, 0.0, -1.0])
    rx = np.array([1.0, -1.0, 0.0, 0.0])
    ry = np.array([0.0, 0.0, 1.0, -1.0])
    w2, b2 = _hat_layer2(rx, ry, 4)
    return MlpNetwork(
        2,
        [AffineMap(w1, b1), AffineMap(w2, b2)],
        AffineMap(_HAT_OUT[None, :], np.zeros(1)),
    )


def build_hat2d_unguarded() -> MlpNetwork:
    """The same sawtooth combination on the raw coordinates, without clamping.

    Only agrees with the reference hat on [0, 1]^2; exposed so the failure
    outside the unit square can be measured exactly.
    """
    w1 = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    b1 = np.zeros(4)
    rx = np.array([1.0, -1.0, 0.0, 0.0])
    ry = np.array([0.0, 0.0, 1.0, -1.0])
    w2, b2 = _hat_layer2(rx, ry, 4)
    return MlpNetwork(
        2,
        [AffineMap(w1, b1), AffineMap(w2, b2)],
        AffineMap(_HAT_OUT[None, :], np.zeros(1)),
    )


def build_fem2d(placements: list[HatPlacement]) -> MlpNetwork:
    """Block-diagonal stack of placed hats: depth 2, at most 15 neurons per hat.

    Each placement's affine map folds into the first layer and its
    coefficient scales the readout, so the network value is
    sum_i coeff_i * hat(T_i(x, y)) everywhere on R^2.
    """
    if not placements:
        raise ValueError("need at least one placement")
    n = len(placements)
    w1 = np.zeros((4 * n, 2))
    b1 = np.zeros(4 * n)
    w2 = np.zeros((15 * n, 4 * n))
    b2 = np.zeros(15 * n)
    out = np.zeros(15 * n)
    rx = np.array([1.0, -1.0, 0.0, 0.0])
    ry = np.array([0.0, 0.0, 1.0, -1.0])
    for k, pl in enumerate(placements):
        a, t = pl.matrix, pl.shift
        w1[4 * k:4 * k + 2] = np.tile(a[0], (2, 1))
        w1[4 * k + 2:4 * k + 4] = np.tile(a[1], (2, 1))
        b1[4 * k:4 * k + 4] = [t[0], t[0] - 1.0, t[1], t[1] - 1.0]
        # within its block the wiring matches the single guarded hat
        wb, bb = _hat_layer2(rx, ry, 4)
        w2[15 * k:15 * (k + 1), 4 * k:4 * (k + 1)] = wb
        b2[15 * k:15 * (k + 1)] = bb
        out[15 * k:15 * (k + 1)] = pl.coeff * _HAT_OUT
    return MlpNetwork(
        2,
        [AffineMap(w1, b1), AffineMap(w2, b2)],
        AffineMap(out[None, :], np.zeros(1)),
    )


def fem_to_placements(f) -> list[HatPlacement]:
    """One placement per nonzero node of a criss-mesh nodal function.

    The map sends the node's support square onto the reference hat's unit
    square; because the hat vanishes outside its support, summing the placed
    hats reproduces the nodal function at every interior point (boundary
    clipping is the caller's concern).
    """
    mesh = f.mesh
    h = mesh.h
    placements = []
    for j, yj in enumerate(mesh.ys):
        for i, xi in enumerate(mesh.xs):
            v = f.values[j, i]
            if v == 0.0:
                continue
            matrix = np.array([[1.0 / (2 * h), 0.0], [0.0, 1.0 / (2 * h)]])
            shift = np.array([0.5 - xi / (2 * h), 0.5 - yj / (2 * h)])
            placements.append(HatPlacement(matrix, shift, v))
    return placements
