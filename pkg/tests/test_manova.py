import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from etfspectra import manova as mv
from etfspectra import spectra as sp
from etfspectra.rng import derive_rng

GRID = [(b, g) for b in (0.3, 0.6, 0.8, 0.9) for g in (0.25, 0.5)]


def rho_gamma_p(t, gamma, p):
    """Oracle: the (gamma, p) parameterization written out directly."""
    s = math.sqrt((p / gamma) * (1 - gamma))
    u = math.sqrt(1 - p)
    r_minus, r_plus = (s - u) ** 2, (s + u) ** 2
    if not r_minus < t < r_plus:
        return 0.0
    return (gamma * math.sqrt((t - r_minus) * (r_plus - t))
            / (2 * math.pi * t * (1 - gamma * t) * min(p, gamma)))


class TestDensity:
    def test_edges_plugin(self):
        e = mv.support_edges(mv.ManovaParams(0.8, 0.5))
        assert e.r_minus == pytest.approx((math.sqrt(0.4) - math.sqrt(0.6)) ** 2, abs=1e-15)
        assert e.r_plus == pytest.approx((math.sqrt(0.4) + math.sqrt(0.6)) ** 2, abs=1e-15)

    @pytest.mark.parametrize("beta,gamma", GRID + [(0.9, 0.9), (1.6, 0.5)])
    def test_total_mass_one(self, beta, gamma):
        dist = mv.ManovaDistribution(mv.ManovaParams(beta, gamma))
        assert dist.total_mass() == pytest.approx(1.0, abs=1e-8)

    def test_mass_check_by_plain_quadrature(self):
        # independent oracle: integrate the raw density formula without the
        # trigonometric substitution
        params = mv.ManovaParams(0.8, 0.5)
        lo, hi = mv.support_edges(params)
        val, _ = integrate.quad(lambda x: mv.manova_density(x, params), lo, hi,
                                limit=400)
        assert val == pytest.approx(1.0, abs=1e-8)

    def test_mp_limit_small_gamma(self):
        # the gap to MP shrinks linearly in gamma (~1.5e-4 per 1e-3 of gamma
        # in the bulk at beta = 0.8)
        assert mv.manova_density(0.8, mv.ManovaParams(0.8, 1e-3)) == pytest.approx(
            mv.mp_density(0.8, 0.8), abs=1e-4)
        for x in [0.3, 0.8, 1.2, 1.8, 2.5]:
            gap_1 = abs(mv.manova_density(x, mv.ManovaParams(0.8, 1e-3))
                        - mv.mp_density(x, 0.8))
            gap_2 = abs(mv.manova_density(x, mv.ManovaParams(0.8, 2.5e-4))
                        - mv.mp_density(x, 0.8))
            assert gap_2 < 5e-5
            assert gap_2 == pytest.approx(gap_1 / 4, rel=0.05)

    def test_atom_for_beta_above_one(self):
        atoms = mv.manova_atoms(mv.ManovaParams(1.5, 0.5))
        assert atoms[0] == mv.Atom(0.0, pytest.approx(1 - 1 / 1.5))

    def test_top_atom_mass(self):
        atoms = mv.manova_atoms(mv.ManovaParams(0.9, 0.9))
        (atom,) = atoms
        assert atom.location == pytest.approx(1 / 0.9)
        assert atom.mass == pytest.approx(1 + 1 / 0.9 - 1 / 0.81, abs=1e-12)

    def test_density_at_atom_raises(self):
        params = mv.ManovaParams(1.5, 0.5)
        with pytest.raises(mv.ManovaAtomError):
            mv.manova_density(0.0, params)

    def test_gamma_p_parameterization_matches_pointwise(self):
        for beta, gamma in [(0.8, 0.5), (1.6, 0.5), (0.6, 0.25)]:
            params = mv.ManovaParams(beta, gamma)
            p = params.p
            scale = max(1.0, beta)  # stripped-zero renormalization
            for t in np.linspace(*mv.support_edges(params), 17)[1:-1]:
                assert scale * mv.manova_density(t, params) == pytest.approx(
                    rho_gamma_p(t, gamma, p), abs=1e-10)


class TestCdf:
    def test_zero_at_lower_edge(self):
        params = mv.ManovaParams(0.8, 0.5)
        dist = mv.ManovaDistribution(params)
        assert dist.cdf(dist.edges.r_minus) == pytest.approx(0.0, abs=1e-12)

    def test_one_at_infinity(self):
        dist = mv.ManovaDistribution(mv.ManovaParams(0.8, 0.5))
        assert dist.cdf(1e9) == pytest.approx(1.0, abs=1e-8)

    def test_grid_cdf_matches_quad(self):
        dist = mv.ManovaDistribution(mv.ManovaParams(0.8, 0.5))
        for x in np.linspace(dist.edges.r_minus, dist.edges.r_plus, 9):
            assert dist.cdf(x) == pytest.approx(dist.cdf_quad(x), abs=1e-9)

    def test_median_of_large_ensemble_sample(self):
        # MC oracle: pooled ensemble eigenvalues straddle the CDF = 1/2 point
        rng = derive_rng(11)
        pool = np.concatenate([
            sp.sample_manova_ensemble(1000, 500, 400, "complex", rng).eigenvalues
            for _ in range(60)])
        dist = mv.ManovaDistribution(mv.ManovaParams(0.8, 0.5))
        assert dist.cdf(np.median(pool)) == pytest.approx(0.5, abs=0.01)

    def test_monotone(self):
        dist = mv.ManovaDistribution(mv.ManovaParams(0.9, 0.9))
        xs = np.linspace(-0.5, 1.3 / 0.9, 400)
        assert np.all(np.diff(dist.cdf(xs)) >= -1e-12)


class TestMarchenkoPastur:
    def test_integrates_to_one(self):
        assert mv.mp_moment_numeric(0, 0.8) == pytest.approx(1.0, abs=1e-8)

    def test_edges(self):
        lo, hi = mv.mp_edges(0.8)
        assert lo == pytest.approx((1 - math.sqrt(0.8)) ** 2)
        assert hi == pytest.approx((1 + math.sqrt(0.8)) ** 2)

    def test_degenerate_limit_concentrates(self):
        lo, hi = mv.mp_edges(1e-6)
        assert lo == pytest.approx(1.0, abs=3e-3)
        assert hi == pytest.approx(1.0, abs=3e-3)

    def test_inverse_moment_closed_form(self):
        # known: E[1/X] = 1/(1-beta) for MP(beta)
        assert mv.mp_moment_numeric(-1, 0.8) == pytest.approx(5.0, abs=1e-7)


class TestMoments:
    @pytest.mark.parametrize("beta,gamma", GRID)
    def test_first_moment_is_p(self, beta, gamma):
        params = mv.ManovaParams(beta, gamma)
        assert mv.manova_moment_numeric(1, params) == pytest.approx(params.p, abs=1e-8)

    def test_second_moment_value(self):
        params = mv.ManovaParams.from_gamma_p(0.5, 0.4)
        assert mv.manova_moment_numeric(2, params) == pytest.approx(0.56, abs=1e-8)

    @pytest.mark.parametrize("beta,gamma", GRID)
    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5, 6])
    def test_numeric_matches_closed(self, beta, gamma, d):
        params = mv.ManovaParams(beta, gamma)
        assert mv.manova_moment_numeric(d, params) == pytest.approx(
            mv.manova_moment_closed(d, params), abs=1e-7)

    def test_inverse_moment_lambda_form(self):
        params = mv.ManovaParams(0.8, 0.5)
        raw = mv.manova_moment_numeric(-1, params)
        assert raw / params.p == pytest.approx(
            mv.inverse_moment_amplification(0.8, params.p), abs=1e-6)

    def test_inverse_moment_needs_beta_below_one(self):
        with pytest.raises(ValueError):
            mv.manova_moment_numeric(-1, mv.ManovaParams(1.5, 0.5))


class TestAmplification:
    def test_table_values(self):
        assert mv.inverse_moment_amplification(0.8, 0.4) == pytest.approx(3.0)
        assert mv.inverse_moment_amplification(0.6, 0.3) == pytest.approx(1.75)

    def test_channel_side(self):
        assert mv.inverse_moment_amplification(2.0, 0.5) == pytest.approx(1.5)

    def test_beta_one_diverges(self):
        with pytest.raises(ZeroDivisionError):
            mv.inverse_moment_amplification(1.0, 0.5)

    @given(st.floats(0.05, 0.95), st.floats(0.0, 0.99))
    @settings(max_examples=60, deadline=None)
    def test_at_least_one(self, beta, p):
        if p >= beta:  # source side needs p < beta (gamma <= 1)
            p = 0.99 * beta
        assert mv.inverse_moment_amplification(beta, p) >= 1.0


class TestEtaChain:
    def test_eta_at_zero_is_one(self):
        assert mv.eta_tilde(0.5, 0.6, 0.0) == pytest.approx(1.0, abs=1e-12)
        assert mv.eta_normalized(0.5, 0.6, 0.0) == pytest.approx(1.0, abs=1e-12)

    def test_eta_tilde_limit_is_erased_fraction(self):
        assert mv.eta_tilde(0.5, 0.6, 1e9) == pytest.approx(0.6, abs=1e-6)

    def test_z_eta_limit_plugin(self):
        assert mv.z_eta_limit(0.5, 0.6) == pytest.approx(6.0)

    def test_z_eta_limit_matches_finite_z(self):
        s, t = 0.5, 0.75
        z = 1e10
        assert z * mv.eta_normalized(s, t, z) == pytest.approx(
            mv.z_eta_limit(s, t), rel=1e-4)

    def test_equal_fractions_diverge(self):
        with pytest.raises(ZeroDivisionError):
            mv.eta_transform_chain(0.5, 0.5, 1.0)

    def test_chain_consistency_with_amplification(self):
        # s = 1 - gamma, t = 1 - p: gamma * limit is the mean inverse
        # eigenvalue of the min(k, m)-normalized subset Gram, which is the
        # source-side amplification
        beta, gamma = 0.8, 0.5
        p = beta * gamma
        lam = gamma * mv.z_eta_limit(1 - gamma, 1 - p)
        assert lam == pytest.approx(mv.inverse_moment_amplification(beta, p), abs=1e-12)


def test_params_validation():
    with pytest.raises(ValueError):
        mv.ManovaParams(0.8, 1.5)
    with pytest.raises(ValueError):
        mv.ManovaParams(-0.1, 0.5)
    with pytest.raises(ValueError):
        mv.ManovaParams(3.0, 0.5)  # p > 1
    params = mv.ManovaParams.from_counts(863, 431, 345)
    assert params.p == pytest.approx(345 / 863)
