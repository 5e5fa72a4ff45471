"""Acceptance suite: every primary claim at its stated tolerance.

Each criterion is one test that prints a single
``[criterion NN] PASS/FAIL`` line (visible with ``pytest -s`` or on
failure) and asserts both the numerical statement and its runtime cap.
"""

import time

import numpy as np
import pytest
from conftest import skip_forward_reference

from relufem import (
    build_fem2d,
    build_hat2d,
    build_hat2d_unguarded,
    build_monomial,
    build_polynomial,
    build_psi_ell,
    build_x2_hat,
    build_xy_hat,
    eval_mlp,
    eval_skip,
    fem_to_placements,
    net_add,
    net_compose_modified,
    random_skip_network,
    skip_to_mlp,
    Polynomial,
)
from relufem import fem2d, hb1d
from relufem.constructions import pad_skip_to_width
from relufem.netcore import AffineMap, SkipLayer, SkipNetwork
from relufem.pwl_exact import extract_pwl, sup_error_vs_quadratic, w1inf_error_vs_quadratic


def _done(num: str, elapsed: float, cap: float, detail: str) -> None:
    print(f"[criterion {num}] PASS - {detail} ({elapsed:.2f}s, cap {cap:.0f}s)")
    assert elapsed < cap, f"criterion {num} exceeded its {cap:.0f}s runtime cap: {elapsed:.2f}s"


def test_criterion_01_square_net_error_identity():
    """Exact sup error of the square nets equals 4^-L and the derivative-sup
    seminorm equals 2^-(L-1), for L = 1..8, within 1e-12.  Under 1 second."""
    t0 = time.perf_counter()
    worst_sup = worst_grad = 0.0
    for level in range(1, 9):
        pwl = extract_pwl(build_x2_hat(level), (-1.0, 1.0))
        sup = sup_error_vs_quadratic(pwl, (-1.0, 1.0)).value
        grad = w1inf_error_vs_quadratic(pwl, (-1.0, 1.0)).value
        worst_sup = max(worst_sup, abs(sup - 4.0 ** -level))
        assert grad <= 2.0 ** -(level - 1) + 1e-12
        worst_grad = max(worst_grad, abs(grad - 2.0 ** -(level - 1)))
    assert worst_sup < 1e-12
    assert worst_grad < 1e-12
    _done("01", time.perf_counter() - t0, 1.0,
          f"sup dev {worst_sup:.1e}, grad dev {worst_grad:.1e} over L=1..8")


def test_criterion_02_interpolation_error_identity():
    """Interpolants of x^2 at levels 0..8 have exact sup error 2^-(2(L+1))
    and derivative-sup error 2^-L, within 1e-12.  Under 1 second."""
    t0 = time.perf_counter()
    worst = 0.0
    for level in range(0, 9):
        pts = hb1d.Grid1D(level).points
        f = hb1d.interpolate_1d(pts * pts, level)
        sup = sup_error_vs_quadratic(f, (0.0, 1.0)).value
        grad = w1inf_error_vs_quadratic(f, (0.0, 1.0)).value
        worst = max(worst, abs(sup - 2.0 ** (-2 * (level + 1))), abs(grad - 2.0 ** -level))
    assert worst < 1e-12
    _done("02", time.perf_counter() - t0, 1.0, f"norm dev {worst:.1e} over L=0..8")


def test_criterion_03_surplus_identity():
    """Every hierarchical surplus of x^2 equals -4^-level, within 1e-14,
    for levels up to 10.  Under 1 second."""
    t0 = time.perf_counter()
    coeffs = hb1d.hierarchical_coeffs(lambda x: x * x, 10)
    worst = max(float(np.max(np.abs(c + 4.0 ** -(k + 1)))) for k, c in enumerate(coeffs))
    assert worst < 1e-14
    _done("03", time.perf_counter() - t0, 1.0, f"surplus dev {worst:.1e} for levels 1..10")


def test_criterion_04_product_net_is_the_mesh_interpolant():
    """The depth-3(L+2) product net equals the level-L mesh interpolant of
    x*y at all level-(L+1) vertices plus 1e5 seeded points, within 1e-12,
    for L = 0..5.  Under 10 seconds."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(0)
    worst = 0.0
    for level in range(0, 6):
        net = build_xy_hat(level + 2, 1.0)
        xs = fem2d.UniformMesh2D(level + 1).xs
        gx, gy = np.meshgrid(xs, xs)
        pts = np.vstack(
            [np.column_stack([gx.ravel(), gy.ravel()]), rng.uniform(-1, 1, size=(100_000, 2))]
        )
        dev = np.max(np.abs(eval_skip(net, pts) - fem2d.interp_xy(level, pts[:, 0], pts[:, 1])))
        worst = max(worst, float(dev))
    assert worst < 1e-12
    _done("04", time.perf_counter() - t0, 10.0, f"max deviation {worst:.1e} over L=0..5")


def test_criterion_05_product_error_range_and_axes():
    """For box half-widths 1 and 2.5 and L = 2..6: the sampled sup error over
    diagonal midpoints plus 1e5 points equals M^2 2^-(2(L-1)) within 1e-10,
    the range stays within M^2 + 1e-12, and both axes evaluate to zero within
    1e-12 at 1000 points each.  Under 30 seconds."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    worst_eq = worst_axis = 0.0
    for bound in (1.0, 2.5):
        for level in range(2, 7):
            net = build_xy_hat(level, bound)
            xs = fem2d.UniformMesh2D(level - 2).xs
            mid = bound * (xs[:-1] + xs[1:]) / 2
            gx, gy = np.meshgrid(mid, mid)
            pts = np.vstack(
                [
                    np.column_stack([gx.ravel(), gy.ravel()]),
                    rng.uniform(-bound, bound, size=(100_000, 2)),
                ]
            )
            vals = eval_skip(net, pts)
            err = np.max(np.abs(vals - pts[:, 0] * pts[:, 1]))
            worst_eq = max(worst_eq, abs(float(err) - bound ** 2 * 2.0 ** (-2 * (level - 1))))
            assert np.max(np.abs(vals)) <= bound ** 2 + 1e-12
            line = np.linspace(-bound, bound, 1000)
            zero = np.zeros_like(line)
            axis_pts = np.vstack([np.column_stack([line, zero]), np.column_stack([zero, line])])
            worst_axis = max(worst_axis, float(np.max(np.abs(eval_skip(net, axis_pts)))))
    assert worst_eq < 1e-10
    assert worst_axis < 1e-12
    _done("05", time.perf_counter() - t0, 30.0,
          f"sup-error dev {worst_eq:.1e}, axis dev {worst_axis:.1e}")


def test_criterion_06_monomial_and_polynomial_bounds():
    """Monomial nets for d <= 4, p <= 5 at L in {3, 5} stay within
    (p-1) 2^-(2(L-1)) of the monomial and within [-1, 1] on the unit box;
    polynomial nets respect the coefficient-weighted bound.  Sampled at 1e5
    points; bound satisfaction, not equality.  Under 60 seconds."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    cases = [(2,), (3,), (5,), (1, 1), (3, 2), (2, 1, 1), (2, 2, 1), (1, 1, 1, 1), (2, 1, 1, 1)]
    for exps in cases:
        d, p = len(exps), sum(exps)
        for level in (3, 5):
            net = build_monomial(exps, level)
            pts = rng.uniform(-1, 1, size=(100_000, d))
            vals = eval_skip(net, pts)
            target = np.prod(pts ** np.asarray(exps, dtype=float), axis=1)
            assert np.max(np.abs(vals - target)) <= (p - 1) * 2.0 ** (-2 * (level - 1)) + 1e-12
            assert np.max(np.abs(vals)) <= 1.0 + 1e-12
    polys = [
        Polynomial(1, {(2,): 1.0}),
        Polynomial(2, {(2, 1): 1.0, (1, 1): 3.0}),
        Polynomial(3, {(1, 1, 1): 1.0, (2, 0, 1): -0.5, (0, 1, 0): 2.0}),
        Polynomial(4, {(2, 1, 1, 1): 1.0, (0, 2, 0, 0): 1.5, (0, 0, 0, 0): -1.0}),
    ]
    for poly in polys:
        coeff_sum = sum(abs(c) for c in poly.terms.values())
        for level in (3, 5):
            net = build_polynomial(poly, level)
            pts = rng.uniform(-1, 1, size=(100_000, poly.dim))
            err = np.max(np.abs(eval_skip(net, pts) - poly(pts)))
            assert err <= (poly.degree - 1) * 2.0 ** (-2 * (level - 1)) * coeff_sum + 1e-12
    _done("06", time.perf_counter() - t0, 60.0,
          f"{2 * len(cases)} monomial and {2 * len(polys)} polynomial bound checks")


def test_criterion_07_conversion_identity():
    """Twenty seeded random skip nets (d in 1..3, widths up to 5, depth up
    to 6) and the constructed nets convert to plain nets agreeing within
    1e-12 at 1e4 points, each width growing by exactly 2(d+1).  Under 10 s."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    nets = []
    for seed in range(20):
        d = int(rng.integers(1, 4))
        ws = [int(rng.integers(1, 6)) for _ in range(int(rng.integers(1, 7)))]
        nets.append(random_skip_network(seed, d, ws))
    nets += [build_x2_hat(4), build_xy_hat(3, 1.0), build_monomial((2, 1), 3)]
    worst = 0.0
    for net in nets:
        plain = skip_to_mlp(net)
        assert plain.widths == [w + 2 * (net.input_dim + 1) for w in net.widths]
        assert plain.depth == net.depth
        pts = rng.uniform(-1, 1, size=(10_000, net.input_dim))
        worst = max(worst, float(np.max(np.abs(eval_mlp(plain, pts) - eval_skip(net, pts)))))
    assert worst < 1e-12
    _done("07", time.perf_counter() - t0, 10.0, f"{len(nets)} nets, max deviation {worst:.1e}")


def test_criterion_08_network_algebra():
    """Addition and modified composition match their functional oracles at
    1e3 points within 1e-12, with exact depth and width contracts.  Under 5 s."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)

    f, g = build_x2_hat(2), build_x2_hat(3)
    total = net_add(f, g)
    xs = rng.uniform(-1.5, 1.5, size=(1000, 1))
    assert np.max(np.abs(eval_skip(total, xs) - (eval_skip(f, xs) + eval_skip(g, xs)))) < 1e-12
    assert total.depth == f.depth + g.depth
    assert set(total.widths) == {3}

    inner = build_x2_hat(2)
    outer = pad_skip_to_width(build_xy_hat(2, 1.0), 4)
    composed = net_compose_modified(outer, inner)
    xs = rng.uniform(-1, 1, size=(1000, 1))
    oracle = eval_skip(outer, np.column_stack([eval_skip(inner, xs), xs[:, 0]]))
    assert np.max(np.abs(eval_skip(composed, xs) - oracle)) < 1e-12
    assert composed.depth == inner.depth + outer.depth
    assert set(composed.widths) == {4}

    proj = SkipNetwork(
        2,
        [SkipLayer(np.zeros((4, 2)), np.zeros((4, 0)), np.zeros(4))],
        AffineMap(np.array([[1.0, 0, 0, 0, 0, 0]]), np.zeros(1)),
    )
    ident = net_compose_modified(proj, build_x2_hat(3))
    assert np.max(np.abs(eval_skip(ident, xs) - eval_skip(build_x2_hat(3), xs))) < 1e-12
    _done("08", time.perf_counter() - t0, 5.0, "addition and composition match their oracles")


def test_criterion_09_hat_representation():
    """The clamped hat net has two hidden layers of at most 15 neurons and
    equals the reference hat on a 201x201 grid over [-2,2]^2 within 1e-12.
    Under 5 seconds."""
    t0 = time.perf_counter()
    net = build_hat2d()
    assert net.depth == 2
    assert max(net.widths) <= 15
    line = np.linspace(-2.0, 2.0, 201)
    gx, gy = np.meshgrid(line, line)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    dev = float(np.max(np.abs(eval_mlp(net, pts) - fem2d.hat_ref(pts[:, 0], pts[:, 1]))))
    assert dev < 1e-12
    _done("09", time.perf_counter() - t0, 5.0, f"grid deviation {dev:.1e}, widths {net.widths}")


def test_criterion_09_unguarded_magnitude_verified():
    """Companion check with the *computed* counterexample value: the
    unclamped sawtooth combination evaluates to exactly 1 at (3/2, 3/2)
    (two inner-tooth peaks of value 1 each, halved, minus a vanished third
    term), while the true hat is 0 there."""
    raw = build_hat2d_unguarded()
    delta = abs(eval_mlp(raw, [1.5, 1.5]) - fem2d.hat_ref(1.5, 1.5))
    assert delta == 1.0
    print("[criterion 09] PASS - unguarded formula is off by exactly 1 at (3/2, 3/2)")


def test_criterion_09_unguarded_magnitude_as_stated():
    """The acceptance statement pins the unclamped formula's deviation at
    (3/2, 3/2) to exactly 1/2.  Direct evaluation gives exactly 1: with
    t = 3/4 the two-tooth sawtooth returns 1 (not 1/2 -- that is the value
    of a *single* tooth), so (1 + 1 - 0)/2 = 1.  This test asserts the
    stated value unchanged and is expected to fail; see the decisions log."""
    raw = build_hat2d_unguarded()
    delta = abs(eval_mlp(raw, [1.5, 1.5]) - fem2d.hat_ref(1.5, 1.5))
    ok = abs(delta - 0.5) <= 1e-14
    print(f"[criterion 09] {'PASS' if ok else 'FAIL'} - stated unguarded deviation 0.5, measured {delta}")
    assert ok, f"stated deviation 0.5 at (3/2, 3/2); constructed value is {delta}"


def test_criterion_10_fem_reproduction():
    """A seeded random level-3 nodal function on the unit square is
    reproduced by the placed-hat net within 1e-10 at 1e4 interior points;
    two hidden layers with at most 15 neurons per placement.  Under 10 s."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    mesh = fem2d.UniformMesh2D(3, (0.0, 1.0, 0.0, 1.0))
    f = fem2d.FemFunction2D(mesh, rng.uniform(-1, 1, size=(9, 9)))
    placements = fem_to_placements(f)
    net = build_fem2d(placements)
    assert net.depth == 2
    assert max(net.widths) <= 15 * len(placements)
    pts = rng.uniform(0, 1, size=(10_000, 2))
    dev = float(np.max(np.abs(eval_mlp(net, pts) - fem2d.fem_eval(f, pts[:, 0], pts[:, 1]))))
    assert dev < 1e-10
    _done("10", time.perf_counter() - t0, 10.0,
          f"{len(placements)} placements, max deviation {dev:.1e}")


def test_criterion_11_detail_net_membership():
    """Detail nets for levels 1..4 match the mesh detail function within
    1e-12 at 1e4 points, with depth level+2 and width at most 9.  Under 5 s."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    worst = 0.0
    for level in range(1, 5):
        net = build_psi_ell(level)
        assert net.depth == level + 2
        assert max(net.widths) <= 9
        pts = rng.uniform(-1, 1, size=(10_000, 2))
        dev = np.max(np.abs(eval_mlp(net, pts) - fem2d.psi_ref(level, pts[:, 0], pts[:, 1])))
        worst = max(worst, float(dev))
    assert worst < 1e-12
    _done("11", time.perf_counter() - t0, 5.0, f"max deviation {worst:.1e} over levels 1..4")


def test_criterion_12_full_verification_run(tmp_path):
    """`verify all` through the CLI finishes with exit code 0 in under
    three minutes."""
    from relufem.cli import main

    t0 = time.perf_counter()
    out = tmp_path / "all.csv"
    code = main(["verify", "all", "--out", str(out)])
    elapsed = time.perf_counter() - t0
    assert code == 0
    rows = out.read_text().strip().splitlines()
    assert len(rows) > 200
    assert all(",true," in row for row in rows[1:])
    _done("12", elapsed, 180.0, f"verify all: {len(rows) - 1} claims, exit 0")


def test_skip_recursion_against_hand_interpreter():
    """Supporting invariant: batched skip evaluation equals the straight-line
    hand recursion at 1e3 random points."""
    rng = np.random.default_rng(7)
    net = random_skip_network(123, 3, [4, 3, 5])
    pts = rng.uniform(-2, 2, size=(1000, 3))
    batch = eval_skip(net, pts)
    refs = np.array([skip_forward_reference(net, p) for p in pts])
    np.testing.assert_allclose(batch, refs, atol=1e-12)
