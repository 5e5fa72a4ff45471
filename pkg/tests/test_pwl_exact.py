"""Exact piecewise-linear extraction and the sup-norm measurements."""

import numpy as np
import pytest

from relufem import (
    build_g,
    build_g_ell,
    build_hat2d,
    build_x2_hat,
    build_xy_hat,
    eval_mlp,
    eval_skip,
    evaluate,
    random_skip_network,
)
from relufem import fem2d, hb1d
from relufem.pwl_exact import (
    extract_pwl,
    linear_region_count,
    sup_error_sampled,
    sup_error_vs_quadratic,
    w1inf_error_vs_quadratic,
)


class TestExtraction:
    def test_tent_breakpoints(self):
        pwl = extract_pwl(build_g(), (0.0, 1.0))
        np.testing.assert_array_equal(pwl.breakpoints, [0.0, 0.5, 1.0])
        np.testing.assert_array_equal(pwl.values, [0.0, 1.0, 0.0])

    def test_tent_is_flat_outside(self):
        pwl = extract_pwl(build_g(), (0.0, 1.0))
        assert pwl.left_slope == 0.0
        assert pwl.right_slope == 0.0

    def test_sawtooth_breakpoints(self):
        pwl = extract_pwl(build_g_ell(3), (0.0, 1.0))
        np.testing.assert_array_equal(pwl.breakpoints, np.arange(9) / 8.0)
        np.testing.assert_array_equal(pwl.values, np.arange(9) % 2)

    def test_square_net_breakpoints(self):
        pwl = extract_pwl(build_x2_hat(3), (-1.0, 1.0))
        np.testing.assert_array_equal(pwl.breakpoints, np.arange(-4, 5) / 4.0)
        np.testing.assert_array_equal(pwl.values, (np.arange(-4, 5) / 4.0) ** 2)

    def test_extension_slopes_match_network(self):
        # the square net continues as |x| outside [-1, 1]
        pwl = extract_pwl(build_x2_hat(4), (-1.0, 1.0))
        assert pwl.left_slope == -1.0
        assert pwl.right_slope == 1.0

    def test_faithful_on_constructed_and_random_networks(self):
        """Extraction reproduces network values at 1000 random points."""
        rng = np.random.default_rng(31)
        nets = [build_g_ell(4), build_x2_hat(5)]
        for seed in range(20):
            ws = [int(rng.integers(1, 6)) for _ in range(int(rng.integers(1, 5)))]
            nets.append(random_skip_network(seed + 50, 1, ws))
        for net in nets:
            pwl = extract_pwl(net, (-1.0, 1.0))
            xs = rng.uniform(-1, 1, size=1000)
            np.testing.assert_allclose(
                hb1d.pwl_eval(pwl, xs), evaluate(net, xs[:, None]), atol=1e-12
            )

    def test_requires_one_input(self):
        with pytest.raises(ValueError, match="1-input"):
            extract_pwl(build_xy_hat(2, 1.0), (0.0, 1.0))


class TestSupErrorVsQuadratic:
    def test_interpolant_error_with_midpoint_witness(self):
        for level in (0, 1, 3, 5):
            pts = hb1d.Grid1D(level).points
            f = hb1d.interpolate_1d(pts * pts, level)
            rep = sup_error_vs_quadratic(f, (0.0, 1.0))
            assert rep.value == pytest.approx(2.0 ** (-2 * (level + 1)), abs=1e-15)
            assert rep.mode == "exact"
            # witness reproduces the reported value
            err = abs(rep.witness[0] ** 2 - hb1d.pwl_eval(f, rep.witness[0]))
            assert err == pytest.approx(rep.value, abs=1e-13)

    def test_identity_line_on_unit_interval(self):
        f = hb1d.PiecewiseLinear1D([0.0, 1.0], [0.0, 1.0])
        rep = sup_error_vs_quadratic(f, (0.0, 1.0))
        assert rep.value == pytest.approx(0.25, abs=1e-16)
        assert rep.witness[0] == pytest.approx(0.5, abs=1e-15)

    def test_degenerate_interval(self):
        f = hb1d.PiecewiseLinear1D([0.0, 1.0], [0.0, 0.0])
        assert sup_error_vs_quadratic(f, (0.0, 0.0)).value == 0.0

    def test_dominates_random_sampling(self):
        """The closed-form supremum is an upper bound for any finite sample."""
        rng = np.random.default_rng(32)
        net = build_x2_hat(3)
        pwl = extract_pwl(net, (-1.0, 1.0))
        exact = sup_error_vs_quadratic(pwl, (-1.0, 1.0)).value
        xs = rng.uniform(-1, 1, size=200_000)
        sampled = np.max(np.abs(xs * xs - eval_skip(net, xs[:, None])))
        assert sampled <= exact + 1e-15
        assert sampled > exact - 1e-4


class TestDerivativeSup:
    def test_square_net_exact_value(self):
        for level in (1, 3, 5):
            pwl = extract_pwl(build_x2_hat(level), (-1.0, 1.0))
            rep = w1inf_error_vs_quadratic(pwl, (-1.0, 1.0))
            assert rep.value == pytest.approx(2.0 ** -(level - 1), abs=1e-15)

    def test_interpolant_exact_value(self):
        for level in (0, 2, 4):
            pts = hb1d.Grid1D(level).points
            f = hb1d.interpolate_1d(pts * pts, level)
            rep = w1inf_error_vs_quadratic(f, (0.0, 1.0))
            assert rep.value == pytest.approx(2.0 ** -level, abs=1e-15)

    def test_flat_line(self):
        f = hb1d.PiecewiseLinear1D([-1.0, 1.0], [0.0, 0.0])
        rep = w1inf_error_vs_quadratic(f, (-1.0, 1.0))
        assert rep.value == 2.0
        assert abs(rep.witness[0]) == 1.0


class TestSampledSup:
    def test_identical_evaluators(self):
        net = build_xy_hat(3, 1.0)
        f = lambda pts: eval_skip(net, pts)
        rep = sup_error_sampled(f, f, [(-1, 1), (-1, 1)], n_random=1000, seed=0)
        assert rep.value == 0.0
        assert rep.mode == "sampled"

    def test_structured_points_carry_exact_maximum(self):
        net = build_xy_hat(4, 1.0)
        xs = fem2d.UniformMesh2D(2).xs
        mid = (xs[:-1] + xs[1:]) / 2
        gx, gy = np.meshgrid(mid, mid)
        rep = sup_error_sampled(
            lambda pts: eval_skip(net, pts),
            lambda pts: pts[:, 0] * pts[:, 1],
            [(-1, 1), (-1, 1)],
            structured_points=np.column_stack([gx.ravel(), gy.ravel()]),
            n_random=50_000,
            seed=1,
        )
        assert rep.value == pytest.approx(2.0 ** -6, abs=1e-14)

    def test_hat_net_agrees_with_reference(self):
        net = build_hat2d()
        rep = sup_error_sampled(
            lambda pts: eval_mlp(net, pts),
            lambda pts: fem2d.hat_ref(pts[:, 0], pts[:, 1]),
            [(-2, 2), (-2, 2)],
            n_random=20_000,
            seed=2,
        )
        assert rep.value < 1e-12

    def test_deterministic_for_fixed_seed(self):
        net = build_xy_hat(3, 1.0)
        f = lambda pts: eval_skip(net, pts)
        g = lambda pts: pts[:, 0] * pts[:, 1]
        a = sup_error_sampled(f, g, [(-1, 1), (-1, 1)], n_random=5000, seed=3)
        b = sup_error_sampled(f, g, [(-1, 1), (-1, 1)], n_random=5000, seed=3)
        assert a.value == b.value and a.witness == b.witness

    def test_needs_points(self):
        with pytest.raises(ValueError, match="point"):
            sup_error_sampled(lambda p: p[:, 0], lambda p: p[:, 0], [(-1, 1)])


class TestRegionCount:
    def test_sawtooth_regions(self):
        for level in (1, 2, 3, 4):
            pwl = extract_pwl(build_g_ell(level), (0.0, 1.0))
            assert linear_region_count(pwl) == 2 ** level

    def test_affine_map_is_one_region(self):
        f = hb1d.PiecewiseLinear1D([0.0, 0.5, 1.0], [0.0, 0.5, 1.0])
        assert linear_region_count(f) == 1

    def test_square_net_regions(self):
        for level in (1, 3, 5):
            pwl = extract_pwl(build_x2_hat(level), (-1.0, 1.0))
            assert linear_region_count(pwl) == 2 ** level


class TestRefinement:
    def test_error_quarters_per_level(self):
        """Exact sup errors shrink by the factor 4 with each extra level."""
        errors = []
        for level in range(1, 9):
            pwl = extract_pwl(build_x2_hat(level), (-1.0, 1.0))
            errors.append(sup_error_vs_quadratic(pwl, (-1.0, 1.0)).value)
        ratios = np.array(errors[1:]) / np.array(errors[:-1])
        np.testing.assert_allclose(ratios, 0.25, atol=1e-12)
