"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines as they
complete.  Criteria 6b and 9b are known-red: they are asserted exactly as
stated and fail against the measured behavior (see the assertion messages);
everything else is green.  Budgets are generous for a laptop-class machine
and asserted alongside the numerical tolerances.
"""

import math
import time

import numpy as np
import pytest
from scipy import stats

from etfspectra import coding as cg
from etfspectra import frames as fr
from etfspectra import harness as hs
from etfspectra import manova as mv
from etfspectra import moments as mo
from etfspectra import spectra as sp
from etfspectra.functionals import FunctionalSpec, evaluate
from etfspectra.rng import derive_rng

SEED = 0


class Budget:
    def __init__(self, criterion, seconds, offset=0.0):
        self.criterion = criterion
        self.seconds = seconds
        self.offset = offset  # shared-fixture time charged to this criterion
        self.t0 = time.perf_counter()

    def elapsed(self):
        return time.perf_counter() - self.t0 + self.offset

    def finish(self, ok, detail):
        el = self.elapsed()
        verdict = "PASS" if ok and el < self.seconds else "FAIL"
        print(f"\nACCEPTANCE {self.criterion}: {verdict} [{el:.1f}s/"
              f"{self.seconds:.0f}s] {detail}")
        assert ok, f"criterion {self.criterion}: {detail}"
        assert el < self.seconds, f"criterion {self.criterion}: runtime {el:.1f}s over budget"


def test_criterion_1_etf_structural_validity():
    budget = Budget(1, 5.0)
    bad = []
    for n in (7, 11, 19, 23, 31, 43, 103):
        F = fr.construct_dss(n)
        if not (fr.is_tight(F, 1e-9) and fr.is_equiangular(F, 1e-9)):
            bad.append(f"dss({n})")
    for q in (5, 13, 17):
        F = fr.construct_real_paley(q)
        if not (fr.is_tight(F, 1e-9) and fr.is_equiangular(F, 1e-9)):
            bad.append(f"real_paley({q})")
    budget.finish(not bad, f"tight+equiangular at 1e-9 for 7 DSS + 3 Paley frames"
                           f"{'; failed: ' + ', '.join(bad) if bad else ''}")


def test_criterion_2_erasure_welch_bound_equality():
    budget = Budget(2, 30.0)
    worst_etf = 0.0
    for F in (fr.construct_dss(7), fr.construct_real_paley(5)):
        gamma = F.m / F.n
        for d in (2, 3, 4):
            poly = mo.exact_expected_moment(F, d)
            for p in (0.25, 0.5, 0.75, 1.0):
                gap = abs(poly.evaluate(p) - mo.ewb_bound(gamma, p, d, F.n))
                worst_etf = max(worst_etf, gap)
    # independent oracle: exhaustive Bernoulli average over all 2^7 patterns
    F = fr.construct_dss(7)
    worst_oracle = 0.0
    for d in (2, 3, 4):
        poly = mo.exact_expected_moment(F, d)
        for p in (0.25, 0.5, 0.75):
            worst_oracle = max(worst_oracle, abs(
                poly.evaluate(p) - mo.all_subsets_expected_moment(F, d, p)))
    LP = fr.construct_lowpass_dft(8, 4)
    lp_excess = min(
        mo.exact_expected_moment(LP, 4).evaluate(p) - mo.ewb_bound(0.5, p, 4, 8)
        for p in (0.25, 0.5, 0.75))
    ok = worst_etf < 1e-9 and worst_oracle < 1e-9 and lp_excess > 1e-6
    budget.finish(ok, f"ETF equality gap {worst_etf:.2e} (<1e-9), oracle gap "
                      f"{worst_oracle:.2e} (<1e-9), lowpass d=4 excess {lp_excess:.2e} (>1e-6)")


PRINTED_POLYNOMIALS = {
    2: {1: {0: 1}, 2: {1: 1}},
    3: {1: {0: 1}, 2: {1: 3}, 3: {2: 1, 1: -1}},
    4: {1: {0: 1}, 2: {1: 6}, 3: {2: 6, 1: -4}, 4: {3: 1, 2: -3, 1: 1}},
    5: {1: {0: 1}, 2: {1: 10}, 3: {2: 20, 1: -10}, 4: {3: 10, 2: -20, 1: 5},
        5: {4: 1, 3: -6, 2: 6, 1: -1}},
    6: {1: {0: 1}, 2: {1: 15}, 3: {2: 50, 1: -20}, 4: {3: 50, 2: -75, 1: 15},
        5: {4: 15, 3: -60, 2: 45, 1: -6}, 6: {5: 1, 4: -10, 3: 20, 2: -10, 1: 1}},
}

NARAYANA_SUMS = {3: {2: 3}, 4: {2: 6, 3: 6}, 5: {2: 10, 3: 20, 4: 10},
                 6: {2: 15, 3: 50, 4: 50, 5: 15}}


def test_criterion_3_moment_engine_exactness():
    budget = Budget(3, 10.0)
    problems = []
    for d, blocks in PRINTED_POLYNOMIALS.items():
        got = mo.asymptotic_moment(d).coefficients
        want = {(k, j): c for k, b in blocks.items() for j, c in b.items()}
        if {kj: int(c) for kj, c in got.items()} != want:
            problems.append(f"m_{d} coefficients")
    for d, sums in NARAYANA_SUMS.items():
        census = mo.partition_census(d)
        for k, total in sums.items():
            if sum(census[k].values()) != total or total != mo.narayana(d, k):
                problems.append(f"narayana sum d={d} k={k}")
    for d in range(1, 11):
        got = mo.asymptotic_moment(d).at_p_one()
        want = tuple(math.comb(d - 1, j) for j in range(d))
        if tuple(int(c) for c in got) + (0,) * (d - len(got)) != want:
            problems.append(f"p=1 identity d={d}")
    budget.finish(not problems, "m_2..m_6 exact, Narayana block sums, p=1 "
                                f"identity to d=10{'; failed: ' + ', '.join(problems) if problems else ''}")


def test_criterion_4_manova_analytic_consistency():
    budget = Budget(4, 10.0)
    worst_mass = worst_mom = worst_inv = 0.0
    for beta in (0.6, 0.8):
        for gamma in (0.25, 0.5):
            params = mv.ManovaParams(beta, gamma)
            worst_mass = max(worst_mass, abs(mv.ManovaDistribution(params).total_mass() - 1))
            for d in range(1, 7):
                worst_mom = max(worst_mom, abs(
                    mv.manova_moment_numeric(d, params) - mv.manova_moment_closed(d, params)))
            lam = mv.manova_moment_numeric(-1, params) / params.p
            worst_inv = max(worst_inv, abs(lam - (1 - params.p) / (1 - beta)))
    ok = worst_mass < 1e-8 and worst_mom < 1e-7 and worst_inv < 1e-6
    budget.finish(ok, f"mass gap {worst_mass:.2e} (<1e-8), moment gap {worst_mom:.2e} "
                      f"(<1e-7), inverse-moment gap {worst_inv:.2e} (<1e-6)")


def test_criterion_5_accuracy_table_reproduction():
    budget = Budget(5, 300.0)
    F = fr.construct_dss(1031)  # m = 515
    results = {}
    for beta, target, tol in ((0.8, 3.0, 0.03), (0.6, 1.75, 0.01)):
        k = round(beta * 515)
        rng = derive_rng(SEED, k)
        vals = [evaluate(FunctionalSpec("ac"),
                         sp.subset_gram_spectrum(F, sp.select(1031, "uniform_k", rng, k=k)))
                for _ in range(200)]
        results[beta] = (float(np.mean(vals)), target, tol)
    ok = all(abs(mean - target) < tol for mean, target, tol in results.values())
    budget.finish(ok, "; ".join(
        f"beta={b}: mean AC {mean:.4f} vs {target} (tol {tol})"
        for b, (mean, target, tol) in results.items()))


@pytest.fixture(scope="module")
def ks_863():
    """Shared draws for criterion 6: 50 KS distances for DSS(863) and the
    same-size complex MANOVA ensemble, plus the shared wall time."""
    t0 = time.perf_counter()
    dss, _ = hs.run_ks_batch("dss", (863,), 0.8, 0.5, 50, seed=SEED)
    ens, _ = hs.run_ks_batch("manova_ensemble", (863,), 0.8, 0.5, 50, seed=SEED)
    return np.array(dss[0].values), np.array(ens[0].values), time.perf_counter() - t0


def test_criterion_6a_universality_ks_level(ks_863):
    budget = Budget("6a", 300.0, offset=ks_863[2])
    med = float(np.median(ks_863[0]))
    budget.finish(med < 0.05, f"median KS distance of DSS(863) subsets {med:.5f} (<0.05)")


def test_criterion_6b_universality_baseline_indistinguishable(ks_863):
    # Stated criterion: two-sample KS between the DSS and MANOVA-ensemble
    # KS-distance samples with p > 0.01.  Measured across seeds, the two
    # samples differ by a consistent ~8% location shift (the deterministic
    # frame tracks the limit more tightly, matching the intercept grouping
    # of the convergence study), so the test detects a real difference for
    # most seeds.  Kept as stated; expected to fail.  See the decisions
    # ledger for the analysis.
    budget = Budget("6b", 300.0, offset=ks_863[2])
    d, p = stats.ks_2samp(ks_863[0], ks_863[1])
    budget.finish(p > 0.01,
                  f"two-sample KS D={d:.3f} p={p:.3g} (stated: p > 0.01; medians "
                  f"{np.median(ks_863[0]):.5f} vs {np.median(ks_863[1]):.5f})")


@pytest.fixture(scope="module")
def test1_fits():
    t0 = time.perf_counter()
    ens, _ = hs.run_ks_batch("manova_ensemble", (103, 211, 431, 863), 0.8, 0.5,
                             500, seed=SEED)
    ss, _ = hs.run_ks_batch("spikes_sines", (104, 212, 432, 864), 0.8, 0.5,
                            500, seed=SEED)
    return (hs.fit_power_law(ens, "test1"), hs.fit_power_law(ss, "test1"),
            time.perf_counter() - t0)


def test_criterion_7_convergence_exponent_bands(test1_fits):
    fit_ens, fit_ss, shared = test1_fits
    budget = Budget(7, 1800.0, offset=shared)
    p_sep = hs.t_test_equal_slopes(fit_ss, fit_ens)
    ok = (0.80 <= fit_ens.slope <= 1.05) and (0.35 <= fit_ss.slope <= 0.60) \
        and p_sep < 0.001
    budget.finish(ok, f"MANOVA slope {fit_ens.slope:.3f} (band 0.80..1.05, R2 "
                      f"{fit_ens.r_squared:.4f}), SS slope {fit_ss.slope:.3f} "
                      f"(band 0.35..0.60), separation p={p_sep:.2e} (<1e-3)")


def test_criterion_8_amplification_laws():
    budget = Budget(8, 300.0)
    G = fr.construct_random("gaussian_iid", 2000, 1000, seed=SEED)
    lam_g = cg.empirical_ahmr(G, 800, trials=20, seed=SEED)
    mp = 1.0 / (1.0 - 0.8)
    F = fr.construct_dss(863)  # m = 431
    k = round(0.8 * 431)
    lam_d = cg.empirical_ahmr(F, k, trials=50, seed=SEED)
    p = k / 863
    manova = (1 - p) / (1 - k / 431)
    ok = abs(lam_g - mp) / mp < 0.05 and abs(lam_d - manova) / manova < 0.02
    budget.finish(ok, f"gaussian AHMR {lam_g:.4f} vs MP {mp:.4f} (5%), DSS AHMR "
                      f"{lam_d:.4f} vs MANOVA {manova:.4f} (2%)")


def test_criterion_9a_high_resolution_rate_gap():
    budget = Budget("9a", 60.0)
    gaps = cg.high_resolution_gaps(0.5, 1e10)
    diff, target = gaps["diff_sc"], gaps["diff_sc_analytic"]
    budget.finish(abs(diff - target) < 0.02,
                  f"delta_MANOVA - delta_MP = {diff:.4f} vs (p/2)log2(1-p) = {target} (tol 0.02)")


def test_criterion_9b_capacity_ratio_high_snr():
    # Stated criterion: C~/C within 0.02 of 1 at snr = 1e6 for the MANOVA
    # model.  The gap from Shannon is -(p/2) log2 log2 y + O(1), so the
    # ratio converges only like 1 - O(log log y / log y): at snr = 1e6 the
    # optimized ratio is ~0.80 and 0.02-closeness is unreachable at any
    # practical snr.  Kept as stated; expected to fail.  See the decisions
    # ledger for the analysis.
    budget = Budget("9b", 60.0)
    snr = 1e6
    _, cap = cg.optimize_beta("channel", 0.5, snr, "manova")
    ratio = cap / cg.shannon_capacity(0.5, snr)
    budget.finish(abs(ratio - 1.0) < 0.02,
                  f"capacity ratio at snr=1e6 is {ratio:.4f} (stated: within 0.02 of 1)")


def test_criterion_9c_capacity_ratio_low_snr():
    budget = Budget("9c", 60.0)
    snr = 1e-6
    _, cap = cg.optimize_beta("channel", 0.5, snr, "manova")
    ratio = cap / cg.shannon_capacity(0.5, snr)
    budget.finish(abs(ratio - 1.0) < 0.02,
                  f"capacity ratio at snr=1e-6 is {ratio:.6f} (within 0.02 of 1)")


def test_criterion_10_crossing_decay():
    budget = Budget(10, 5.0)
    worst = 0.0
    for n in (7, 11, 19, 31):
        F = fr.construct_dss(n)
        x = F.n / F.m - 1.0
        worst = max(worst, abs(mo.crossing_term(F) - x * x / (n - 1)))
    budget.finish(worst < 1e-9, f"max |crossing term - x^2/(n-1)| = {worst:.2e} (<1e-9)")
