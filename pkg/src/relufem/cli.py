"""Command-line front end: a thin client of the network service.

Every command goes through the HTTP API.  By default the app is mounted
in-process (no server needed); pass ``--server http://host:port`` to target
a running instance instead.  Exit codes: 0 success, 1 verification failure,
2 bad arguments or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path


class ServiceClient:
    """POSTs to a remote server or to the in-process app."""

    def __init__(self, server: str | None = None):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=600.0)
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service.app import create_app

            self._client = TestClient(create_app())

    def post(self, path: str, payload: dict) -> tuple[int, dict]:
        resp = self._client.post(path, json=payload)
        try:
            body = resp.json()
        except ValueError:
            body = {"detail": resp.text}
        return resp.status_code, body


def _fail(message: str, code: int = 2) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _write_text(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read_points(path: str, dim: int) -> list[list[float]]:
    """Points file: one comma- or whitespace-separated point per line.

    A single leading non-numeric line is treated as a header; any other
    malformed row is an error reported with its line number.
    """
    points = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            tokens = line.replace(",", " ").split()
            try:
                row = [float(t) for t in tokens]
            except ValueError:
                if lineno == 1:
                    continue  # header row
                raise ValueError(f"line {lineno}: not a numeric row: {line!r}")
            if len(row) != dim:
                raise ValueError(
                    f"line {lineno}: point has {len(row)} coordinates, network expects {dim}"
                )
            points.append(row)
    return points


def _cmd_build(args, client: ServiceClient) -> int:
    payload: dict = {"target": args.target, "bound": args.bound}
    if args.levels is not None:
        payload["levels"] = args.levels
    if args.exponents:
        try:
            payload["exponents"] = [int(t) for t in args.exponents.split(",")]
        except ValueError:
            return _fail(f"--exponents must be comma-separated integers, got {args.exponents!r}")
    if args.coeffs:
        try:
            payload["polynomial"] = json.loads(Path(args.coeffs).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            return _fail(f"cannot read polynomial file {args.coeffs}: {exc}")
    if args.values:
        try:
            payload["fem"] = json.loads(Path(args.values).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            return _fail(f"cannot read nodal-function file {args.values}: {exc}")
    status, body = client.post("/build", payload)
    if status != 200:
        return _fail(str(body.get("detail", body)))
    _write_text(json.dumps(body["network"], indent=1) + "\n", args.out)
    print(f"depth {body['depth']}, widths {body['widths']}", file=sys.stderr)
    return 0


def _cmd_eval(args, client: ServiceClient) -> int:
    try:
        doc = json.loads(Path(args.network).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(f"cannot read network file {args.network}: {exc}")
    dim = doc.get("input_dim")
    if not isinstance(dim, int):
        return _fail("network document has no integer input_dim")
    try:
        points = _read_points(args.points, dim)
    except (OSError, ValueError) as exc:
        return _fail(str(exc))
    status, body = client.post("/eval", {"network": doc, "points": points})
    if status != 200:
        return _fail(str(body.get("detail", body)))
    header = ",".join(f"x{k + 1}" for k in range(dim)) + ",value"
    lines = [header]
    for pt, v in zip(points, body["values"]):
        lines.append(",".join("%.17g" % c for c in pt) + ",%.17g" % v)
    _write_text("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_convert(args, client: ServiceClient) -> int:
    try:
        doc = json.loads(Path(args.network).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(f"cannot read network file {args.network}: {exc}")
    status, body = client.post("/convert", {"network": doc})
    if status != 200:
        return _fail(str(body.get("detail", body)))
    _write_text(json.dumps(body["network"], indent=1) + "\n", args.out)
    print(f"width delta: {body['width_delta']}", file=sys.stderr)
    return 0


def _cmd_verify(args, client: ServiceClient) -> int:
    payload = {
        "suite": args.suite,
        "seed": args.seed,
        "trials": args.trials,
        "mesh_level": args.mesh_level,
    }
    if args.max_level is not None:
        payload["max_level"] = args.max_level
    status, body = client.post("/verify", payload)
    if status != 200:
        return _fail(str(body.get("detail", body)))
    from .reports import Report, rows_to_csv

    rows = [Report(**r) for r in body["rows"]]
    _write_text(rows_to_csv(rows), args.out)
    failed = [r for r in rows if not r.passed]
    print(
        f"{len(rows) - len(failed)}/{len(rows)} claims passed",
        file=sys.stderr,
    )
    return 1 if failed else 0


def _cmd_report(args, client: ServiceClient) -> int:
    status, body = client.post("/report", {})
    if status != 200:
        return _fail(str(body.get("detail", body)))
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, content in body["files"].items():
            (out_dir / name).write_text(content)
    except OSError as exc:
        return _fail(f"cannot write to {args.out}: {exc}")
    print(f"wrote {len(body['files'])} files to {out_dir}", file=sys.stderr)
    return 0


def _cmd_serve(args, _client) -> int:
    import uvicorn

    uvicorn.run("relufem.service.app:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relufem",
        description="Build, evaluate, convert and verify constructive ReLU networks.",
    )
    parser.add_argument("--server", help="URL of a running service; default is in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="emit a network document")
    p_build.add_argument(
        "target",
        choices=["g", "g-ell", "relu1", "x2", "xy", "psi", "hat2d", "monomial", "polynomial", "fem"],
    )
    p_build.add_argument("--levels", type=int, help="depth parameter of the construction")
    p_build.add_argument("--bound", type=float, default=1.0, help="half-width of the product box")
    p_build.add_argument("--exponents", help="comma-separated monomial exponents, e.g. 2,1")
    p_build.add_argument("--coeffs", help="polynomial JSON file {dim, terms}")
    p_build.add_argument("--values", help="nodal-function JSON file {level, domain, values}")
    p_build.add_argument("--out", help="write the document here instead of stdout")
    p_build.set_defaults(func=_cmd_build)

    p_eval = sub.add_parser("eval", help="evaluate a network on a points file, emitting CSV")
    p_eval.add_argument("network", help="network document file")
    p_eval.add_argument("points", help="points file, one point per line")
    p_eval.add_argument("--out", help="write the CSV here instead of stdout")
    p_eval.set_defaults(func=_cmd_eval)

    p_convert = sub.add_parser("convert", help="convert a skip network to a plain network")
    p_convert.add_argument("network", help="skip network document file")
    p_convert.add_argument("--out", help="write the document here instead of stdout")
    p_convert.set_defaults(func=_cmd_convert)

    p_verify = sub.add_parser("verify", help="run a claim suite and emit a CSV report")
    p_verify.add_argument("suite")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--trials", type=int, default=20)
    p_verify.add_argument("--max-level", type=int, default=None)
    p_verify.add_argument("--mesh-level", type=int, default=3)
    p_verify.add_argument("--out", help="write the CSV here instead of stdout")
    p_verify.set_defaults(func=_cmd_verify)

    p_report = sub.add_parser("report", help="emit the error-curve and function-table CSVs")
    p_report.add_argument("--out", required=True, help="output directory")
    p_report.set_defaults(func=_cmd_report)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    client = None if args.command == "serve" else ServiceClient(args.server)
    return args.func(args, client)


if __name__ == "__main__":
    sys.exit(main())
