import numpy as np
import pytest

from ksr import gridfn as gf
from ksr import lspace as ls
from ksr import modulus as mo
from ksr import recovery as rec
from ksr.errors import KnotViolation, NonConcave, SearchFailed

wid = mo.power(1, 1)
wsq = mo.power(1, 0.5)


class TestKnots:
    def test_two_knots_unit_interval(self):
        t, tau = rec.optimal_knots(2, 0, 1)
        assert np.allclose(t, [0.25, 0.75])
        assert np.allclose(tau, [0, 0.5, 1])

    def test_single_knot(self):
        t, _ = rec.optimal_knots(1, 0, 1)
        assert np.allclose(t, [0.5])

    def test_four_knots_long_interval(self):
        t, _ = rec.optimal_knots(4, 0, 2)
        assert np.allclose(t, [0.25, 0.75, 1.25, 1.75])

    def test_zero_knots_rejected(self):
        with pytest.raises(KnotViolation):
            rec.optimal_knots(0, 0, 1)

    def test_window_validation(self):
        with pytest.raises(KnotViolation):
            rec.validate_knots(np.array([0.3, 0.5]), 0.15, 0, 1)  # overlap
        with pytest.raises(KnotViolation):
            rec.validate_knots(np.array([0.05]), 0.1, 0, 1)  # leaves domain


class TestErrorValues:
    def test_convexify_value(self):
        assert rec.error_convexify(2, 0.1, wid, 1.0) == pytest.approx(0.25, abs=1e-12)

    def test_convexify_full_windows(self):
        assert rec.error_convexify(1, 0.5, wid, 1.0) == pytest.approx(0.5, abs=1e-12)

    def test_integral_value(self):
        assert rec.error_integral(2, 0.05, wid, 1.0) == pytest.approx(0.1, abs=1e-12)

    def test_integral_vanishes_with_full_information(self):
        assert rec.error_integral(2, 0.25, wid, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_h_out_of_range(self):
        with pytest.raises(KnotViolation):
            rec.error_convexify(2, 0.3, wid, 1.0)


class TestRecoveryMethods:
    def test_constant_function_recovered_exactly(self):
        f = gf.constant_grid(ls.interval(0, 1), 0, 1, 256)
        knots, _ = rec.optimal_knots(2, 0, 1)
        info = rec.mean_info(f, knots, 0.1)
        method = rec.recover_convexify(info, n=256)
        assert gf.sup_dist(f, method) <= 1e-12

    def test_constant_interval_integral(self):
        f = gf.constant_grid(ls.interval(0, 1), 0, 1, 256)
        knots, _ = rec.optimal_knots(2, 0, 1)
        info = rec.mean_info(f, knots, 0.1)
        out = rec.recover_integral(info)
        assert ls.close(out, ls.interval(0, 1), tol=1e-10)

    def test_mean_info_values(self):
        f = gf.real_grid(lambda t: t, 0, 1, 1024)
        knots, _ = rec.optimal_knots(2, 0, 1)
        info = rec.mean_info(f, knots, 0.1)
        assert info.means[0].payload == pytest.approx(0.25, abs=1e-9)
        assert info.means[1].payload == pytest.approx(0.75, abs=1e-9)


class TestLowerExtremalMean:
    @pytest.mark.parametrize("omega", [wid, wsq])
    def test_two_knot_construction(self, omega):
        knots, _ = rec.optimal_knots(2, 0, 1)
        f = rec.lower_extremal_mean(knots, 0.1, omega, 0, 1, n=4096)
        for t in knots:
            mean = ls.scale(1 / 0.2, gf.integrate(f, t - 0.1, t + 0.1))
            assert ls.norm(mean) <= gf.eps_tolerance(omega, 1.0, 4096)
        target = rec.error_convexify(2, 0.1, omega, 1.0)
        assert float(np.max(np.abs(f.data))) >= target - gf.eps_tolerance(omega, 1.0, 4096)
        assert gf.check_Homega(f, omega).member

    def test_single_knot_profile_peaks_at_left_end(self):
        knots, tau = rec.optimal_knots(1, 0, 1)
        f = rec.lower_extremal_mean(knots, 0.1, wid, 0, 1, n=2048)
        # the construction centers its profile at tau_1 = a
        assert f.data[0] == pytest.approx(float(np.max(f.data)), abs=1e-12)
        mean = ls.scale(1 / 0.2, gf.integrate(f, knots[0] - 0.1, knots[0] + 0.1))
        assert ls.norm(mean) <= 1e-7

    def test_nonuniform_knots(self):
        knots = np.array([0.2, 0.8])
        f = rec.lower_extremal_mean(knots, 0.05, wsq, 0, 1, n=4096)
        for t in knots:
            mean = ls.scale(1 / 0.1, gf.integrate(f, t - 0.05, t + 0.05))
            assert ls.norm(mean) <= 1e-6
        assert gf.check_Homega(f, wsq).member
        # the longest cell is [0.5, 0.8], so the sup exceeds the uniform value
        assert float(np.max(np.abs(f.data))) >= rec.error_convexify(2, 0.05, wsq, 1.0) - 1e-6


class TestLowerExtremalIntegral:
    def test_uniform_equality(self):
        knots, _ = rec.optimal_knots(2, 0, 1)
        f = rec.lower_extremal_integral(knots, 0.05, wid, 0, 1, n=4096)
        val = gf.integrate(f).payload
        assert val >= 0.1 - gf.eps_tolerance(wid, 1.0, 4096)
        assert val == pytest.approx(0.1, abs=1e-4)
        for t in knots:
            mean = ls.scale(1 / 0.1, gf.integrate(f, t - 0.05, t + 0.05))
            assert ls.norm(mean) <= 1e-9
        assert gf.check_Homega(f, wid).member

    def test_small_window_limit(self):
        knots, _ = rec.optimal_knots(2, 0, 1)
        f = rec.lower_extremal_integral(knots, 1e-4, wsq, 0, 1, n=4096)
        limit = 4 * wsq.primitive(0, 0.25)
        assert gf.integrate(f).payload == pytest.approx(limit, rel=2e-2)

    def test_membership_sqrt(self):
        knots, _ = rec.optimal_knots(3, 0, 1)
        f = rec.lower_extremal_integral(knots, 0.05, wsq, 0, 1, n=2048)
        assert gf.check_Homega(f, wsq).member

    def test_nonconcave_rejected(self):
        knots, _ = rec.optimal_knots(2, 0, 1)
        with pytest.raises(NonConcave):
            rec.lower_extremal_integral(knots, 0.05, mo.PowerModulus(1, 2.0), 0, 1)


class TestPolyline:
    def test_interpolates_nodes(self):
        vals = [ls.interval(0, 1), ls.interval(1, 3), ls.interval(0.5, 1.5)]
        pl = rec.polyline(vals, [0, 0.5, 1], n=512)
        for t, v in zip([0, 0.5, 1], vals):
            assert ls.close(pl.value_at(t), v, tol=1e-12)

    def test_linear_function_reproduced(self):
        f = gf.lift(gf.real_grid(lambda t: 2 * t - 0.3, 0, 1, 512), ls.interval(1, 1))
        partition = np.linspace(0, 1, 3)
        pl = rec.polyline([f.value_at(t) for t in partition], partition, n=512)
        assert gf.sup_dist(f, pl) <= 1e-12

    def test_pointwise_bound_midpoint(self):
        assert rec.polyline_error(0.5, 0, 1, wid) == pytest.approx(1 / 8, abs=1e-15)
        assert rec.polyline_error(0.0, 0, 1, wid) == 0.0

    def test_uniform_bound(self):
        assert rec.polyline_uniform_error(2, wid, 1.0) == pytest.approx(1 / 32, abs=1e-15)

    def test_nonconvex_value_rejected(self):
        with pytest.raises(ValueError):
            rec.polyline([ls.union([(0, 0), (1, 1)]), ls.union([(0, 0), (1, 1)])], [0, 1])

    def test_deviation_bound_on_samples(self):
        from ksr import oracle as orc

        partition = np.linspace(0, 1, 3)
        bound = rec.polyline_uniform_error(2, wid, 1.0)
        eps = gf.eps_tolerance(wid, 1.0, 512)
        spec = orc.SampleSpec(orc.W1HOMEGA, "interval", wid, 0.0, 1.0, 512, 30, 5)
        for f in orc.sample_class(spec):
            pl = rec.polyline([f.value_at(t) for t in partition], partition, n=512)
            assert gf.sup_dist(f, pl) <= bound + eps
            # pointwise form at a few interior points
            for t in (0.1, 0.3, 0.6):
                k = 0 if t < 0.5 else 1
                ptbound = rec.polyline_error(t, partition[k], partition[k + 1], wid)
                assert ls.dist(f.value_at(t), pl.value_at(t)) <= ptbound + eps

    def test_chain_bound_on_samples(self):
        from ksr import oracle as orc

        spec = orc.SampleSpec(orc.W1HOMEGA, "real", wid, 0.0, 1.0, 512, 30, 6)
        eps = gf.eps_tolerance(wid, 1.0, 512)
        for f in orc.sample_class(spec):
            fa, fb = f.value_at(0.0), f.value_at(1.0)
            for t in (0.25, 0.5, 0.8):
                blend = ls.add(ls.scale(1 - t, fa), ls.scale(t, fb))
                assert ls.dist(f.value_at(t), blend) <= rec.chain_bound(t, 0, 1, wid) + eps


class TestOmegaSpline:
    @pytest.mark.parametrize("omega", [wid, wsq])
    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_uniform_equality(self, omega, n):
        partition = np.linspace(0, 1, n + 1)
        G = rec.omega_spline(partition, omega, n=2048)
        target = rec.polyline_uniform_error(n, omega, 1.0)
        assert float(np.max(np.abs(G.data))) == pytest.approx(target, abs=gf.eps_tolerance(omega, 1.0, 2048))

    def test_nodes_vanish_and_slope_in_class(self):
        partition = np.linspace(0, 1, 5)
        G = rec.omega_spline(partition, wid, n=2048)
        assert np.max(np.abs(np.interp(partition, G.nodes, G.data))) <= 1e-9
        slope = np.diff(G.data) / G.step
        slope_fn = gf.real_grid(np.concatenate([slope, [slope[-1]]]), 0, 1, 2048)
        assert gf.check_Homega(slope_fn, wid).defect <= 1e-6

    def test_mildly_nonuniform_partition(self):
        partition = np.array([0.0, 0.45, 1.0])
        G = rec.omega_spline(partition, wid, n=2048)
        assert np.max(np.abs(np.interp(partition, G.nodes, G.data))) <= 1e-7
        assert float(np.max(np.abs(G.data))) >= 1 / 32 - gf.eps_tolerance(wid, 1.0, 2048)

    def test_large_nonuniform_rejected(self):
        partition = np.concatenate([[0], np.cumsum(np.linspace(0.1, 0.2, 8))])
        partition = partition / partition[-1]
        with pytest.raises(SearchFailed):
            rec.omega_spline(partition, wid, n=256)

    def test_nonconcave_rejected(self):
        with pytest.raises(NonConcave):
            rec.omega_spline([0, 0.5, 1], mo.PowerModulus(1, 2.0))


class TestDerivativeRecovery:
    def test_value(self):
        assert rec.derivative_recovery_value(4, wid, 1.0) == pytest.approx(0.125, abs=1e-15)

    def test_step_derivative_of_polyline(self):
        vals = [ls.interval(0, 0), ls.interval(0, 1), ls.interval(1, 3)]
        d = rec.polyline_derivative(vals, [0, 0.5, 1], n=512)
        assert ls.close(d.value_at(0.2), ls.interval(0, 2), tol=1e-12)
        assert ls.close(d.value_at(0.9), ls.interval(2, 4), tol=1e-12)

    def test_lifted_linear_exact(self):
        f = gf.lift(gf.real_grid(lambda t: 3 * t, 0, 1, 512), ls.interval(1, 1))
        partition = np.linspace(0, 1, 5)
        d = rec.polyline_derivative([f.value_at(t) for t in partition], partition, n=512)
        expect = gf.constant_grid(ls.interval(3, 3), 0, 1, 512)
        assert gf.sup_dist(d, expect) <= 1e-12

    def test_error_bound_matches_point_vs_mean(self):
        from ksr.ostrowski import point_vs_mean_bound

        assert rec.derivative_error_bound(0.3, 0.25, 0.5, wsq) == point_vs_mean_bound(0.3, 0.25, 0.5, wsq)

    @pytest.mark.parametrize("n,omega", [(4, wid), (3, wsq)])
    def test_extremal_construction(self, n, omega):
        f = rec.derivative_extremal(n, omega, 0, 1, grid_n=4096)
        partition = np.linspace(0, 1, n + 1)
        # exact zeros when the partition lands on grid nodes, grid-scale
        # interpolation error otherwise (n = 3 does not divide 4096)
        assert np.max(np.abs(np.interp(partition, f.nodes, f.data))) <= 2 * f.step
        value = rec.derivative_recovery_value(n, omega, 1.0)
        slope_at_a = abs(f.data[1] - f.data[0]) / f.step
        assert slope_at_a == pytest.approx(value, abs=gf.eps_tolerance(omega, 1.0, 4096))
        slope = np.diff(f.data) / f.step
        slope_fn = gf.real_grid(np.concatenate([slope, [slope[-1]]]), 0, 1, 4096)
        assert gf.check_Homega(slope_fn, omega).defect <= gf.eps_tolerance(omega, 1.0, 4096)


class TestReport:
    def test_report_flags(self):
        r = rec.RecoveryReport("integral", 0.1, 0.1005, 0.0999, 100, 1e-2)
        assert r.sound and r.attained
        d = r.as_dict()
        assert d["problem"] == "integral" and d["sound"] and d["attained"]
