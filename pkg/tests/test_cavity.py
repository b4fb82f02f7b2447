import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netctl.cavity import (
    EmpiricalDist,
    PoissonDist,
    SFStaticDist,
    cavity_residual,
    nd_asymptotic,
    solve_cavity,
    solve_cavity_er,
    solve_cavity_sf,
)
from netctl.generators import poisson_config_digraph
from netctl.structural import min_driver_set


class TestDistributions:
    def test_poisson_pmf_sums_to_one(self):
        d = PoissonDist(3.0)
        assert abs(sum(d.pmf(k) for k in range(80)) - 1.0) < 1e-10

    def test_sf_pmf_sums_to_one(self):
        d = SFStaticDist(2.0, 3.0)
        assert abs(sum(d.pmf(k) for k in range(5000)) - 1.0) < 1e-6

    def test_sf_tail_exponent(self):
        # P(k) ~ k^-gamma: ratio of log-pmf slopes at large k
        d = SFStaticDist(2.0, 3.0)
        slope = (math.log(d.pmf(400)) - math.log(d.pmf(100))) / math.log(4.0)
        assert abs(slope + 3.0) < 0.25  # finite-k correction to the pure power law

    def test_empirical_from_degrees(self):
        d = EmpiricalDist.from_degrees([0, 1, 1, 2, 2, 2])
        assert d.pmf(2) == 0.5 and abs(d.mean - 8 / 6) < 1e-12

    @given(st.floats(0.1, 6.0), st.floats(0.0, 1.0))
    @settings(max_examples=60, deadline=None)
    def test_generating_functions_map_unit_interval(self, mean, x):
        for d in (PoissonDist(mean), SFStaticDist(mean, 2.8)):
            assert 0.0 <= d.g(x) <= 1.0
            assert 0.0 <= d.h(x) <= 1.0

    def test_g_at_one(self):
        for d in (PoissonDist(2.5), SFStaticDist(1.7, 2.3),
                  EmpiricalDist([0.1, 0.4, 0.5])):
            assert abs(d.g(1.0) - 1.0) < 1e-9
            assert abs(d.h(1.0) - 1.0) < 1e-9

    def test_sf_requires_gamma_above_two(self):
        with pytest.raises(ValueError):
            SFStaticDist(2.0, 2.0)


class TestSolveCavity:
    def test_sparse_limit_needs_all_drivers(self):
        nd, _ = solve_cavity_er(1e-3)
        assert nd > 0.999

    def test_er_k8_matches_decay_scale(self):
        nd, _ = solve_cavity_er(8.0)
        assert abs(nd - 0.02216) < 5e-4

    def test_poisson_empirical_consistency(self):
        # empirical histogram of a Poisson law reproduces the closed form
        p = PoissonDist(2.0)
        e = EmpiricalDist([p.pmf(k) for k in range(60)])
        nd_p, _ = solve_cavity(p, p, 4.0)
        nd_e, _ = solve_cavity(e, e, 4.0)
        assert abs(nd_p - nd_e) < 1e-8

    def test_fixed_point_residual(self):
        d_in = PoissonDist(3.0)
        d_out = SFStaticDist(3.0, 2.6)
        nd, state = solve_cavity(d_in, d_out, 6.0)
        assert cavity_residual(d_in, d_out, state) < 1e-8
        assert 0.0 < nd < 1.0

    def test_state_components_in_unit_interval(self):
        _, s = solve_cavity_er(5.0)
        for v in s.as_tuple():
            assert -1e-9 <= v <= 1.0 + 1e-9
        assert abs(s.w3 - (1 - s.w1 - s.w2)) < 1e-12

    def test_monotone_in_mean_degree(self):
        grid = np.arange(0.5, 12.01, 0.25)
        vals = [solve_cavity_er(k)[0] for k in grid]
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))

    def test_sf_approaches_one_near_critical_exponent(self):
        nd_05, _ = solve_cavity_sf(4.0, 2.05)
        nd_01, _ = solve_cavity_sf(4.0, 2.01)
        assert nd_05 > 0.9 and nd_01 > nd_05

    def test_sf_large_gamma_recovers_er(self):
        nd_sf, _ = solve_cavity_sf(4.0, 60.0)
        nd_er, _ = solve_cavity_er(4.0)
        assert abs(nd_sf - nd_er) < 2e-3

    def test_rejects_nonpositive_degree(self):
        with pytest.raises(ValueError):
            solve_cavity_er(0.0)

    def test_agrees_with_matching_simulation(self):
        rng = np.random.default_rng(5)
        for k in (2.0, 6.0):
            g = poisson_config_digraph(20000, k, rng)
            nd_sim = min_driver_set(g).n_drivers / g.n_nodes
            nd_cav, _ = solve_cavity_er(k)
            assert abs(nd_sim - nd_cav) < 0.02


class TestAsymptotic:
    def test_er(self):
        assert abs(nd_asymptotic("er", 10.0) - math.exp(-5.0)) < 1e-15

    def test_sf(self):
        assert abs(nd_asymptotic("sf-static", 10.0, 3.0) - math.exp(-2.5)) < 1e-15

    def test_large_gamma_recovers_er_exponent(self):
        assert abs(nd_asymptotic("sf-static", 8.0, 1e9)
                   - nd_asymptotic("er", 8.0)) < 1e-8

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            nd_asymptotic("ws", 4.0)
