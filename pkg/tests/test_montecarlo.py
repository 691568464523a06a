import math

import numpy as np
import pytest
from scipy import stats

from holefield import bounds as bd
from holefield.model import preset
from holefield.montecarlo import (
    PhpRealization,
    SimConfig,
    interference,
    sample_php_realization,
    sample_ppp_disk,
    simulate,
)
from numpy.random import Generator, Philox


def rng(seed=0):
    return Generator(Philox(seed))


class TestPppSampling:
    def test_count_distribution(self):
        lam, radius = 2.0, 5.0
        counts = [len(sample_ppp_disk(lam, radius, rng(i))) for i in range(400)]
        expected = lam * math.pi * radius**2
        # mean of 400 Poisson draws, 3 sigma band
        assert np.mean(counts) == pytest.approx(
            expected, abs=3.0 * math.sqrt(expected / 400.0)
        )

    def test_radial_cdf_uniformity(self):
        # (r/R)^2 of uniform disk points is U(0,1); Kolmogorov-Smirnov check
        pts = sample_ppp_disk(3.0, 6.0, rng(42))
        u = (np.hypot(pts[:, 0], pts[:, 1]) / 6.0) ** 2
        assert stats.kstest(u, "uniform").pvalue > 1e-3

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            sample_ppp_disk(-1.0, 1.0, rng())
        with pytest.raises(ValueError):
            sample_ppp_disk(1.0, 0.0, rng())


class TestPhpSampling:
    def test_no_hole_center_inside_exclusion(self):
        p = preset("HD-LH").params
        cfg = SimConfig(window_radius=15.0)
        for i in range(20):
            real = sample_php_realization(p, cfg, rng(i))
            if len(real.holes):
                assert np.hypot(real.holes[:, 0], real.holes[:, 1]).min() >= p.D

    def test_retained_points_outside_every_hole(self):
        p = preset("HD-SH").params
        real = sample_php_realization(p, SimConfig(window_radius=12.0), rng(7))
        kept = real.retained_points
        for hx, hy in real.holes:
            if len(kept):
                assert np.hypot(kept[:, 0] - hx, kept[:, 1] - hy).min() >= p.D

    def test_zero_hole_density_keeps_everything(self):
        p = preset("LD-SH").params.with_(lambda1=0.0)
        real = sample_php_realization(p, SimConfig(window_radius=10.0), rng(3))
        assert real.retained.all()

    def test_interference_positive_and_seed_stable(self):
        p = preset("LD-SH").params
        cfg = SimConfig(window_radius=10.0)
        a = interference(sample_php_realization(p, cfg, rng(5)), p, rng(5))
        b = interference(sample_php_realization(p, cfg, rng(5)), p, rng(5))
        assert a == b
        assert a >= 0.0


class TestSimulate:
    def test_deterministic_given_seed(self):
        p = preset("LD-SH").params
        cfg = SimConfig(window_radius=10.0, iterations=200, seed=11, s_values=(1e-3,))
        a = simulate(p, cfg)
        b = simulate(p, cfg)
        assert a.laplace[1e-3].mean == b.laplace[1e-3].mean

    def test_seed_changes_result(self):
        p = preset("LD-SH").params
        cfg = lambda seed: SimConfig(
            window_radius=10.0, iterations=200, seed=seed, s_values=(1e-3,)
        )
        assert simulate(p, cfg(1)).laplace[1e-3].mean != simulate(p, cfg(2)).laplace[1e-3].mean

    def test_no_holes_matches_closed_form(self):
        """With no carving the empirical transform must hit the closed-form
        baseline within 3 sigma plus the reported truncation bias."""
        p = preset("LD-SH").params.with_(lambda1=0.0)
        s = 1e-3
        cfg = SimConfig(window_radius=30.0, iterations=3000, seed=17, s_values=(s,))
        res = simulate(p, cfg)
        exact = bd.laplace_ppp(s, p.lambda2, p.P, p.alpha).value
        est = res.laplace[s]
        slack = 3.0 * est.std_error + res.truncation_bias[s]
        assert abs(est.mean - exact) <= slack

    def test_truncation_bias_formula(self):
        p = preset("LD-SH").params
        s = 1e-3
        cfg = SimConfig(window_radius=20.0, iterations=10, seed=0, s_values=(s,))
        res = simulate(p, cfg)
        expected = (
            2.0 * math.pi * p.lambda2 * s * p.P * 20.0 ** (2.0 - p.alpha) / (p.alpha - 2.0)
        )
        assert res.truncation_bias[s] == pytest.approx(expected, rel=1e-12)

    def test_coverage_bracketed_by_bounds(self):
        p = preset("LD-SH").params
        cfg = SimConfig(window_radius=25.0, iterations=3000, seed=5, gamma_values=(p.gamma,))
        res = simulate(p, cfg)
        est = res.coverage[p.gamma]
        lb = bd.coverage("LB1_CLOSEST", p)
        ub = bd.coverage("UB_INDEP_HOLES", p)
        assert lb - 3.0 * est.std_error <= est.mean <= ub + 3.0 * est.std_error

    def test_mean_retained_thinning(self):
        # interior density should track lambda2 exp(-lambda1 pi D^2) broadly
        p = preset("HD-SH").params
        cfg = SimConfig(window_radius=15.0, iterations=300, seed=9)
        res = simulate(p, cfg)
        window_area = math.pi * 15.0**2
        density = res.mean_retained / window_area
        target = bd.density_php(p.lambda1, p.lambda2, p.D)
        # window-edge effects inflate the retained density slightly (holes
        # centered outside the window carve less), so the band is loose
        assert density == pytest.approx(target, rel=0.05)


def test_empty_realization_interference_zero():
    p = preset("LD-SH").params
    real = PhpRealization(
        holes=np.empty((0, 2)), base_points=np.empty((0, 2)), retained=np.empty(0, dtype=bool)
    )
    assert interference(real, p, rng()) == 0.0


def test_zero_density_gives_empty_sample():
    assert len(sample_ppp_disk(0.0, 5.0, rng())) == 0


def test_empirical_laplace_exact_at_zero_argument():
    from holefield.montecarlo import empirical_laplace

    p = preset("LD-SH").params
    est = empirical_laplace(p, SimConfig(iterations=50), 0.0)
    assert est.mean == 1.0 and est.std_error == 0.0


@pytest.mark.parametrize("name", ["LD-SH", "HD-SH", "LD-LH", "HD-LH"])
def test_laplace_coverage_identity(name):
    """E[exp(-sI)] at s = gamma r0^alpha / P and the coverage estimate are
    two estimators of the same quantity; with shared realizations they must
    agree within 4 combined standard errors."""
    from holefield.model import coverage_argument

    p = preset(name).params
    s = coverage_argument(p).s
    cfg = SimConfig(window_radius=25.0, iterations=2500, seed=4,
                    s_values=(s,), gamma_values=(p.gamma,))
    res = simulate(p, cfg)
    la, cov = res.laplace[s], res.coverage[p.gamma]
    combined = math.hypot(la.std_error, cov.std_error)
    assert abs(la.mean - cov.mean) <= 4.0 * combined + res.truncation_bias[s]
