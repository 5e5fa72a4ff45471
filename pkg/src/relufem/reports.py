"""Claim verification suites and machine-readable reports.

Each suite measures a family of identities or bounds satisfied by the
constructive networks, checking them against the independent mesh oracles
and the exact piecewise-linear analyzer.  A row either asserts an equality
(|measured - theoretical| within tolerance) or a bound (measured at most
theoretical + tolerance).  All randomness is seeded, so reports are
deterministic and bit-stable across runs.
"""

from __future__ import annotations

import io
import time
from dataclasses import dataclass

import numpy as np

from . import constructions as cons
from . import fem2d, hb1d, pwl_exact
from .netcore import AffineMap, SkipLayer, SkipNetwork, eval_mlp, eval_skip, random_skip_network

__all__ = ["Report", "SUITE_NAMES", "report_tables", "rows_to_csv", "run_suite"]

SUITE_NAMES = (
    "x2",
    "identity",
    "xy",
    "monomial",
    "polynomial",
    "algebra",
    "convert",
    "psi",
    "hat2d",
    "fem",
    "all",
)


@dataclass
class Report:
    """One verified claim: an equality or a one-sided bound."""

    claim_id: str
    statement: str
    theoretical: float
    measured: float
    witness: str
    tolerance: float
    mode: str  # "eq" | "le"
    passed: bool
    runtime_ms: float


def _row(
    claim_id: str,
    statement: str,
    theoretical: float,
    measured: float,
    tolerance: float,
    t0: float,
    mode: str = "eq",
    witness: str = "",
) -> Report:
    if mode == "eq":
        passed = abs(measured - theoretical) <= tolerance
    elif mode == "le":
        passed = measured <= theoretical + tolerance
    else:
        raise ValueError(f"unknown claim mode {mode!r}")
    return Report(
        claim_id,
        statement,
        float(theoretical),
        float(measured),
        witness,
        float(tolerance),
        mode,
        passed,
        1000.0 * (time.perf_counter() - t0),
    )


def _fmt_point(pt) -> str:
    return "(" + ", ".join("%.17g" % float(v) for v in np.atleast_1d(pt)) + ")"


def _grid_points_2d(level: int) -> np.ndarray:
    xs = fem2d.UniformMesh2D(level).xs
    gx, gy = np.meshgrid(xs, xs)
    return np.column_stack([gx.ravel(), gy.ravel()])


def _diag_midpoints(level: int, scale: float = 1.0) -> np.ndarray:
    """Cell-diagonal midpoints of the level mesh on [-scale, scale]^2.

    The interpolation error of the product attains its maximum exactly at
    these points, so including them makes the sampled supremum exact.
    """
    xs = fem2d.UniformMesh2D(level).xs
    mid = (xs[:-1] + xs[1:]) / 2.0
    gx, gy = np.meshgrid(mid, mid)
    return scale * np.column_stack([gx.ravel(), gy.ravel()])


# -- suites --------------------------------------------------------------------


def suite_x2(max_level: int = 8, **_) -> list[Report]:
    """Square-function identities: network errors, interpolant errors, surpluses."""
    rows = []
    for level in range(1, max_level + 1):
        t0 = time.perf_counter()
        pwl = pwl_exact.extract_pwl(cons.build_x2_hat(level), (-1.0, 1.0))
        sup = pwl_exact.sup_error_vs_quadratic(pwl, (-1.0, 1.0))
        rows.append(
            _row(
                f"x2.net.sup.L{level}",
                f"exact sup |net - x^2| on [-1,1] for the depth-{level} square net equals 4^-{level}",
                4.0 ** -level,
                sup.value,
                1e-12,
                t0,
                witness=_fmt_point(sup.witness),
            )
        )
        t0 = time.perf_counter()
        grad = pwl_exact.w1inf_error_vs_quadratic(pwl, (-1.0, 1.0))
        rows.append(
            _row(
                f"x2.net.grad.L{level}",
                f"exact sup |2x - net'| on [-1,1] equals 2^-({level}-1)",
                2.0 ** -(level - 1),
                grad.value,
                1e-12,
                t0,
                witness=_fmt_point(grad.witness),
            )
        )
    for level in range(0, max_level + 1):
        t0 = time.perf_counter()
        pts = hb1d.Grid1D(level).points
        interp = hb1d.interpolate_1d(pts * pts, level)
        sup = pwl_exact.sup_error_vs_quadratic(interp, (0.0, 1.0))
        rows.append(
            _row(
                f"x2.interp.sup.L{level}",
                f"exact sup |x^2 - level-{level} interpolant| on [0,1] equals 2^-(2*({level}+1))",
                2.0 ** (-2 * (level + 1)),
                sup.value,
                1e-12,
                t0,
                witness=_fmt_point(sup.witness),
            )
        )
        t0 = time.perf_counter()
        grad = pwl_exact.w1inf_error_vs_quadratic(interp, (0.0, 1.0))
        rows.append(
            _row(
                f"x2.interp.grad.L{level}",
                f"exact sup |2x - interpolant slope| on [0,1] equals 2^-{level}",
                2.0 ** -level,
                grad.value,
                1e-12,
                t0,
                witness=_fmt_point(grad.witness),
            )
        )
    for level in range(1, 11):
        t0 = time.perf_counter()
        coeffs = hb1d.hierarchical_coeffs(lambda x: x * x, level)[level - 1]
        dev = float(np.max(np.abs(coeffs + 4.0 ** -level)))
        rows.append(
            _row(
                f"x2.surplus.L{level}",
                f"all level-{level} surplus coefficients of x^2 equal -4^-{level}",
                0.0,
                dev,
                1e-14,
                t0,
            )
        )
    return rows


def suite_identity(max_level: int = 5, seed: int = 0, n_random: int = 100_000, **_) -> list[Report]:
    """The product net of depth 3(L+2) reproduces the level-L mesh interpolant of x*y."""
    rows = []
    for level in range(0, max_level + 1):
        t0 = time.perf_counter()
        net = cons.build_xy_hat(level + 2, 1.0)
        rep = pwl_exact.sup_error_sampled(
            lambda pts: eval_skip(net, pts),
            lambda pts: fem2d.interp_xy(level, pts[:, 0], pts[:, 1]),
            [(-1.0, 1.0), (-1.0, 1.0)],
            structured_points=_grid_points_2d(level + 1),
            n_random=n_random,
            seed=seed + level,
        )
        rows.append(
            _row(
                f"identity.L{level}",
                f"depth-{3 * (level + 2)} product net equals the level-{level} mesh interpolant of x*y",
                0.0,
                rep.value,
                1e-12,
                t0,
                witness=_fmt_point(rep.witness),
            )
        )
    return rows


def suite_xy(seed: int = 0, n_random: int = 100_000, **_) -> list[Report]:
    """Product approximation: exact sup error, range bound, axis vanishing."""
    rows = []
    for bound in (1.0, 2.5):
        for level in range(2, 7):
            net = cons.build_xy_hat(level, bound)
            t0 = time.perf_counter()
            structured = _diag_midpoints(level - 2, scale=bound)
            rep = pwl_exact.sup_error_sampled(
                lambda pts: eval_skip(net, pts),
                lambda pts: pts[:, 0] * pts[:, 1],
                [(-bound, bound), (-bound, bound)],
                structured_points=structured,
                n_random=n_random,
                seed=seed + level,
            )
            rows.append(
                _row(
                    f"xy.sup.M{bound}.L{level}",
                    f"sup |product net - x*y| on [-{bound},{bound}]^2 equals {bound}^2 * 2^-(2*({level}-1))",
                    bound * bound * 2.0 ** (-2 * (level - 1)),
                    rep.value,
                    1e-10,
                    t0,
                    witness=_fmt_point(rep.witness),
                )
            )
            t0 = time.perf_counter()
            pts = np.concatenate([structured, np.random.default_rng(seed + level).uniform(
                -bound, bound, size=(20_000, 2))])
            vals = np.abs(eval_skip(net, pts))
            k = int(np.argmax(vals))
            rows.append(
                _row(
                    f"xy.range.M{bound}.L{level}",
                    f"max |product net| on [-{bound},{bound}]^2 is at most {bound}^2",
                    bound * bound,
                    float(vals[k]),
                    1e-12,
                    t0,
                    mode="le",
                    witness=_fmt_point(pts[k]),
                )
            )
            t0 = time.perf_counter()
            line = np.linspace(-bound, bound, 1000)
            axis_pts = np.concatenate(
                [np.column_stack([line, np.zeros_like(line)]),
                 np.column_stack([np.zeros_like(line), line])]
            )
            axis_dev = float(np.max(np.abs(eval_skip(net, axis_pts))))
            rows.append(
                _row(
                    f"xy.axis.M{bound}.L{level}",
                    "product net vanishes identically on both coordinate axes",
                    0.0,
                    axis_dev,
                    1e-12,
                    t0,
                )
            )
    return rows


_MONOMIAL_CASES = (
    (2,), (3,), (4,), (5,),
    (1, 1), (2, 1), (2, 2), (3, 2),
    (1, 1, 1), (2, 1, 1), (2, 2, 1),
    (1, 1, 1, 1), (2, 1, 1, 1),
)


def suite_monomial(seed: int = 0, n_random: int = 100_000, **_) -> list[Report]:
    """Monomial nets respect the error bound and never leave [-1, 1] on the unit box."""
    rows = []
    for exps in _MONOMIAL_CASES:
        p = sum(exps)
        d = len(exps)
        for level in (3, 5):
            t0 = time.perf_counter()
            net = cons.build_monomial(exps, level)
            powers = np.asarray(exps, dtype=np.float64)
            rep = pwl_exact.sup_error_sampled(
                lambda pts: eval_skip(net, pts),
                lambda pts: np.prod(pts ** powers, axis=1),
                [(-1.0, 1.0)] * d,
                n_random=n_random,
                seed=seed + level + 13 * p,
            )
            name = "".join(str(e) for e in exps)
            rows.append(
                _row(
                    f"monomial.bound.k{name}.L{level}",
                    f"sampled error of the x^{exps} net is within ({p}-1) * 2^-(2*({level}-1))",
                    (p - 1) * 2.0 ** (-2 * (level - 1)),
                    rep.value,
                    1e-12,
                    t0,
                    mode="le",
                    witness=_fmt_point(rep.witness),
                )
            )
            t0 = time.perf_counter()
            pts = np.random.default_rng(seed + 7 * level).uniform(-1, 1, size=(20_000, d))
            mx = float(np.max(np.abs(eval_skip(net, pts))))
            rows.append(
                _row(
                    f"monomial.range.k{name}.L{level}",
                    f"the x^{exps} net stays within [-1, 1] on the unit box",
                    1.0,
                    mx,
                    1e-12,
                    t0,
                    mode="le",
                )
            )
    return rows


def _polynomial_cases(seed: int) -> list[cons.Polynomial]:
    fixed = [
        cons.Polynomial(1, {(2,): 1.0}),
        cons.Polynomial(2, {(2, 1): 1.0, (1, 1): 3.0}),
        cons.Polynomial(3, {(1, 1, 1): 1.0, (2, 0, 1): 1.0, (0, 2, 0): -2.0, (1, 0, 0): 0.5}),
        cons.Polynomial(4, {(1, 1, 1, 1): 1.0, (2, 1, 0, 0): 0.5, (0, 0, 2, 2): -1.0, (0, 0, 0, 0): 2.0}),
    ]
    rng = np.random.default_rng(seed)
    for d in (2, 3, 4):
        terms = {}
        for _ in range(4):
            exps = tuple(int(e) for e in rng.multinomial(int(rng.integers(2, 6)), np.ones(d) / d))
            sign = 1.0 if rng.random() < 0.5 else -1.0
            terms[exps] = sign * float(np.round(rng.uniform(0.25, 2.0), 3))
        fixed.append(cons.Polynomial(d, terms))
    return fixed


def suite_polynomial(seed: int = 0, n_random: int = 100_000, **_) -> list[Report]:
    """Polynomial nets respect the coefficient-weighted error bound on the unit box."""
    rows = []
    for idx, poly in enumerate(_polynomial_cases(seed)):
        p = poly.degree
        coeff_sum = sum(abs(c) for c in poly.terms.values())
        for level in (3, 5):
            t0 = time.perf_counter()
            net = cons.build_polynomial(poly, level)
            rep = pwl_exact.sup_error_sampled(
                lambda pts: eval_skip(net, pts),
                poly,
                [(-1.0, 1.0)] * poly.dim,
                n_random=n_random,
                seed=seed + level + idx,
            )
            bound = max(p - 1, 0) * 2.0 ** (-2 * (level - 1)) * coeff_sum
            rows.append(
                _row(
                    f"polynomial.bound.case{idx}.L{level}",
                    f"sampled error of a degree-{p}, dim-{poly.dim} polynomial net is within "
                    f"({p}-1) * 2^-(2*({level}-1)) * sum|coeffs|",
                    bound,
                    rep.value,
                    1e-12,
                    t0,
                    mode="le",
                    witness=_fmt_point(rep.witness),
                )
            )
    return rows


def suite_algebra(seed: int = 0, **_) -> list[Report]:
    """Structural operators match their functional oracles with exact depth/width."""
    rows = []
    rng = np.random.default_rng(seed)

    t0 = time.perf_counter()
    f = cons.build_x2_hat(2)
    g = cons.build_x2_hat(3)
    total = cons.net_add(f, g)
    pts = rng.uniform(-1.5, 1.5, size=(1000, 1))
    dev = float(np.max(np.abs(eval_skip(total, pts) - (eval_skip(f, pts) + eval_skip(g, pts)))))
    rows.append(_row("algebra.add.values", "summed net equals the sum of its parts", 0.0, dev, 1e-12, t0))
    t0 = time.perf_counter()
    rows.append(
        _row(
            "algebra.add.depth",
            "summed net depth is the sum of the part depths",
            f.depth + g.depth,
            total.depth,
            0.0,
            t0,
        )
    )
    t0 = time.perf_counter()
    rows.append(
        _row("algebra.add.width", "summed net keeps the common width", 3, max(total.widths), 0.0, t0)
    )

    t0 = time.perf_counter()
    zero = SkipNetwork(
        1,
        [SkipLayer(np.zeros((3, 1)), np.zeros((3, 0)), np.zeros(3))],
        AffineMap(np.zeros((1, 4)), np.zeros(1)),
    )
    with_zero = cons.net_add(f, zero)
    dev = float(np.max(np.abs(eval_skip(with_zero, pts) - eval_skip(f, pts))))
    rows.append(_row("algebra.add.zero", "adding a zero net leaves values unchanged", 0.0, dev, 1e-12, t0))

    t0 = time.perf_counter()
    f1 = random_skip_network(seed + 1, 2, [3, 3])
    proj = SkipNetwork(
        3,
        [SkipLayer(np.zeros((4, 3)), np.zeros((4, 0)), np.zeros(4))],
        AffineMap(np.array([[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]]), np.zeros(1)),
    )
    comp = cons.net_compose_modified(proj, f1)
    pts2 = rng.uniform(-1, 1, size=(1000, 2))
    dev = float(np.max(np.abs(eval_skip(comp, pts2) - eval_skip(f1, pts2))))
    rows.append(
        _row(
            "algebra.compose.projection",
            "composing with the first-coordinate projection reproduces the inner net",
            0.0,
            dev,
            1e-12,
            t0,
        )
    )
    t0 = time.perf_counter()
    rows.append(
        _row(
            "algebra.compose.depth",
            "composed net depth is the sum of the part depths",
            f1.depth + proj.depth,
            comp.depth,
            0.0,
            t0,
        )
    )

    t0 = time.perf_counter()
    inner = cons.build_x2_hat(2)  # width 3, d = 1
    outer = cons.pad_skip_to_width(cons.build_xy_hat(2, 1.0), 4)  # f2(x0, x) ~ x0 * x
    comp2 = cons.net_compose_modified(outer, inner)
    pts1 = rng.uniform(-1, 1, size=(1000, 1))
    inner_vals = eval_skip(inner, pts1)
    oracle = eval_skip(outer, np.column_stack([inner_vals, pts1[:, 0]]))
    dev = float(np.max(np.abs(eval_skip(comp2, pts1) - oracle)))
    rows.append(
        _row(
            "algebra.compose.values",
            "composed net equals outer(inner(x), x) on the unit box",
            0.0,
            dev,
            1e-12,
            t0,
        )
    )
    t0 = time.perf_counter()
    rows.append(
        _row(
            "algebra.compose.width",
            "composed net width is the inner width plus one",
            4,
            max(comp2.widths),
            0.0,
            t0,
        )
    )
    return rows


def suite_convert(seed: int = 0, trials: int = 20, n_points: int = 10_000, **_) -> list[Report]:
    """Skip-to-plain conversion: pointwise equality and the exact width increment."""
    rows = []
    rng = np.random.default_rng(seed)
    cases = []
    for t in range(trials):
        d = int(rng.integers(1, 4))
        depth = int(rng.integers(1, 7))
        ws = [int(rng.integers(1, 6)) for _ in range(depth)]
        cases.append((f"random{t}", random_skip_network(seed + 100 + t, d, ws)))
    cases.append(("x2.L4", cons.build_x2_hat(4)))
    cases.append(("xy.L3", cons.build_xy_hat(3, 1.0)))
    cases.append(("monomial21.L3", cons.build_monomial((2, 1), 3)))
    for idx, (name, net) in enumerate(cases):
        t0 = time.perf_counter()
        mlp = cons.skip_to_mlp(net)
        d = net.input_dim
        pts = np.random.default_rng(seed + 1000 + idx).uniform(-1, 1, size=(n_points, d))
        dev = float(np.max(np.abs(eval_mlp(mlp, pts) - eval_skip(net, pts))))
        rows.append(
            _row(
                f"convert.values.{name}",
                "converted plain net agrees with the skip net pointwise",
                0.0,
                dev,
                1e-12,
                t0,
            )
        )
        t0 = time.perf_counter()
        width_dev = max(
            abs(mw - (sw + 2 * (d + 1))) for mw, sw in zip(mlp.widths, net.widths)
        )
        rows.append(
            _row(
                f"convert.width.{name}",
                "every converted width is the skip width plus 2*(input_dim + 1)",
                0.0,
                width_dev,
                0.0,
                t0,
            )
        )
    return rows


def suite_psi(seed: int = 0, n_points: int = 10_000, **_) -> list[Report]:
    """Parallel-sawtooth detail nets match the mesh-oracle detail functions."""
    rows = []
    rng = np.random.default_rng(seed)
    for level in range(1, 5):
        t0 = time.perf_counter()
        net = cons.build_psi_ell(level)
        pts = rng.uniform(-1, 1, size=(n_points, 2))
        dev = float(
            np.max(np.abs(eval_mlp(net, pts) - fem2d.psi_ref(level, pts[:, 0], pts[:, 1])))
        )
        rows.append(
            _row(
                f"psi.values.L{level}",
                f"the level-{level} detail net matches the mesh detail function on [-1,1]^2",
                0.0,
                dev,
                1e-12,
                t0,
            )
        )
        t0 = time.perf_counter()
        rows.append(
            _row(
                f"psi.depth.L{level}",
                f"detail net depth is {level} + 2",
                level + 2,
                net.depth,
                0.0,
                t0,
            )
        )
        t0 = time.perf_counter()
        rows.append(
            _row(
                f"psi.width.L{level}", "detail net width is at most 9", 9, max(net.widths), 0.0, t0, mode="le"
            )
        )
    return rows


def suite_hat2d(**_) -> list[Report]:
    """Two-hidden-layer hat: global agreement, size contract, unguarded failure."""
    rows = []
    t0 = time.perf_counter()
    net = cons.build_hat2d()
    line = np.linspace(-2.0, 2.0, 201)
    gx, gy = np.meshgrid(line, line)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    dev = np.abs(eval_mlp(net, pts) - fem2d.hat_ref(pts[:, 0], pts[:, 1]))
    k = int(np.argmax(dev))
    rows.append(
        _row(
            "hat2d.grid",
            "clamped hat net equals the reference hat on a 201x201 grid over [-2,2]^2",
            0.0,
            float(dev[k]),
            1e-12,
            t0,
            witness=_fmt_point(pts[k]),
        )
    )
    t0 = time.perf_counter()
    rows.append(_row("hat2d.depth", "hat net has exactly two hidden layers", 2, net.depth, 0.0, t0))
    t0 = time.perf_counter()
    rows.append(
        _row("hat2d.width", "hat net layers have at most 15 neurons", 15, max(net.widths), 0.0, t0, mode="le")
    )
    t0 = time.perf_counter()
    raw = cons.build_hat2d_unguarded()
    delta = abs(eval_mlp(raw, np.array([1.5, 1.5])) - fem2d.hat_ref(1.5, 1.5))
    rows.append(
        _row(
            "hat2d.unguarded",
            "without clamping the sawtooth formula is nonzero at (3/2, 3/2); "
            "the constructed value there is exactly 1",
            1.0,
            float(delta),
            1e-14,
            t0,
            witness="(1.5, 1.5)",
        )
    )
    return rows


def suite_fem(seed: int = 0, mesh_level: int = 3, n_points: int = 10_000, **_) -> list[Report]:
    """A random nodal function on the unit square is reproduced by placed hats."""
    rows = []
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    mesh = fem2d.UniformMesh2D(mesh_level, (0.0, 1.0, 0.0, 1.0))
    values = rng.uniform(-1.0, 1.0, size=(mesh.ncells_y + 1, mesh.ncells_x + 1))
    fem = fem2d.FemFunction2D(mesh, values)
    placements = cons.fem_to_placements(fem)
    net = cons.build_fem2d(placements)
    pts = rng.uniform(0.0, 1.0, size=(n_points, 2))
    dev = np.abs(eval_mlp(net, pts) - fem2d.fem_eval(fem, pts[:, 0], pts[:, 1]))
    k = int(np.argmax(dev))
    rows.append(
        _row(
            "fem.roundtrip",
            f"placed-hat net reproduces a random level-{mesh_level} nodal function at interior points",
            0.0,
            float(dev[k]),
            1e-10,
            t0,
            witness=_fmt_point(pts[k]),
        )
    )
    t0 = time.perf_counter()
    rows.append(_row("fem.depth", "placed-hat net has exactly two hidden layers", 2, net.depth, 0.0, t0))
    t0 = time.perf_counter()
    rows.append(
        _row(
            "fem.width",
            "placed-hat net layers have at most 15 neurons per placement",
            15 * len(placements),
            max(net.widths),
            0.0,
            t0,
            mode="le",
        )
    )
    return rows


_SUITES = {
    "x2": suite_x2,
    "identity": suite_identity,
    "xy": suite_xy,
    "monomial": suite_monomial,
    "polynomial": suite_polynomial,
    "algebra": suite_algebra,
    "convert": suite_convert,
    "psi": suite_psi,
    "hat2d": suite_hat2d,
    "fem": suite_fem,
}


def run_suite(
    suite: str,
    seed: int = 0,
    trials: int = 20,
    max_level: int | None = None,
    mesh_level: int = 3,
) -> list[Report]:
    """Run one named suite (or 'all') and return its report rows in claim order."""
    if suite not in SUITE_NAMES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {', '.join(SUITE_NAMES)}")
    kwargs = {"seed": seed, "trials": trials, "mesh_level": mesh_level}
    if max_level is not None:
        kwargs["max_level"] = max_level
    if suite == "all":
        rows = []
        for name in _SUITES:
            rows.extend(_SUITES[name](**kwargs))
        return rows
    return _SUITES[suite](**kwargs)


def rows_to_csv(rows: list[Report]) -> str:
    """CSV with '.' decimals, 17-significant-digit floats and LF line endings."""
    buf = io.StringIO()
    buf.write("claim_id,statement,theoretical,measured,witness,tolerance,pass,runtime_ms\n")
    for r in rows:
        witness = '"' + r.witness.replace('"', '""') + '"' if r.witness else ""
        statement = '"' + r.statement.replace('"', '""') + '"'
        buf.write(
            f"{r.claim_id},{statement},{'%.17g' % r.theoretical},{'%.17g' % r.measured},"
            f"{witness},{'%.17g' % r.tolerance},{str(r.passed).lower()},{'%.3f' % r.runtime_ms}\n"
        )
    return buf.getvalue()


# -- figure-style data tables ----------------------------------------------------


def report_tables(seed: int = 0) -> dict[str, str]:
    """Deterministic CSV tables: error curves and function tables.

    Returns a mapping from file name to file content; a README describing
    every column is included.
    """
    files: dict[str, str] = {}

    lines = ["level,sup_error,sup_error_theory,grad_error,grad_error_theory"]
    for level in range(1, 9):
        pwl = pwl_exact.extract_pwl(cons.build_x2_hat(level), (-1.0, 1.0))
        sup = pwl_exact.sup_error_vs_quadratic(pwl, (-1.0, 1.0)).value
        grad = pwl_exact.w1inf_error_vs_quadratic(pwl, (-1.0, 1.0)).value
        lines.append(
            f"{level},{'%.17g' % sup},{'%.17g' % 4.0 ** -level},"
            f"{'%.17g' % grad},{'%.17g' % 2.0 ** -(level - 1)}"
        )
    files["x2_error_curve.csv"] = "\n".join(lines) + "\n"

    lines = ["level,bound,sup_error,sup_error_theory"]
    for bound in (1.0, 2.0):
        for level in range(2, 7):
            net = cons.build_xy_hat(level, bound)
            rep = pwl_exact.sup_error_sampled(
                lambda pts: eval_skip(net, pts),
                lambda pts: pts[:, 0] * pts[:, 1],
                [(-bound, bound), (-bound, bound)],
                structured_points=_diag_midpoints(level - 2, scale=bound),
                n_random=20_000,
                seed=seed,
            )
            theory = bound * bound * 2.0 ** (-2 * (level - 1))
            lines.append(f"{level},{'%.17g' % bound},{'%.17g' % rep.value},{'%.17g' % theory}")
    files["xy_error_curve.csv"] = "\n".join(lines) + "\n"

    lines = ["exponents,level,sampled_error,bound"]
    for exps in ((2,), (1, 1), (2, 1), (2, 2, 1)):
        p = sum(exps)
        for level in (2, 3, 4, 5):
            net = cons.build_monomial(exps, level)
            powers = np.asarray(exps, dtype=np.float64)
            rep = pwl_exact.sup_error_sampled(
                lambda pts: eval_skip(net, pts),
                lambda pts: np.prod(pts ** powers, axis=1),
                [(-1.0, 1.0)] * len(exps),
                n_random=20_000,
                seed=seed,
            )
            bound_val = (p - 1) * 2.0 ** (-2 * (level - 1))
            name = " ".join(str(e) for e in exps)
            lines.append(f"{name},{level},{'%.17g' % rep.value},{'%.17g' % bound_val}")
    files["monomial_error_curve.csv"] = "\n".join(lines) + "\n"

    lines = ["level,x,value"]
    xs = np.arange(65) / 64.0
    for level in range(1, 5):
        net = cons.build_g_ell(level)
        vals = eval_mlp(net, xs[:, None])
        for x, v in zip(xs, vals):
            lines.append(f"{level},{'%.17g' % x},{'%.17g' % v}")
    files["sawtooth_table.csv"] = "\n".join(lines) + "\n"

    lines = ["level,x,y,scaled_value"]
    grid = np.arange(33) / 32.0
    for level in (2, 3):
        scale = 4.0 ** level
        gx, gy = np.meshgrid(grid, grid)
        vals = scale * fem2d.psi_ref(level, gx.ravel(), gy.ravel())
        for x, y, v in zip(gx.ravel(), gy.ravel(), vals):
            lines.append(f"{level},{'%.17g' % x},{'%.17g' % y},{'%.17g' % v}")
    files["detail_table.csv"] = "\n".join(lines) + "\n"

    files["README.md"] = (
        "# Report tables\n\n"
        "All files are deterministic CSV with LF line endings and 17-significant-digit floats.\n\n"
        "- `x2_error_curve.csv`: exact sup and derivative-sup errors of the square nets on\n"
        "  [-1,1] per depth `level`, next to their closed-form values (4^-level and\n"
        "  2^-(level-1)).\n"
        "- `xy_error_curve.csv`: sup error of the product nets on [-bound,bound]^2 per\n"
        "  depth parameter `level`, next to bound^2 * 2^-(2(level-1)).\n"
        "- `monomial_error_curve.csv`: sampled error of monomial nets on the unit box\n"
        "  against the bound (degree-1) * 2^-(2(level-1)).\n"
        "- `sawtooth_table.csv`: values of the level-fold sawtooth composition on a 65-point\n"
        "  dyadic grid over [0,1].\n"
        "- `detail_table.csv`: the mesh detail function scaled by 4^level on a 33x33 grid\n"
        "  over [0,1]^2 (its maximum is exactly 1).\n"
    )
    return files
