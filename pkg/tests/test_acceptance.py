"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest -v -s tests/test_acceptance.py`` or directly with
``python tests/test_acceptance.py``. Soft criteria print SOFT-PASS or
SOFT-FAIL and never fail the run; every other line is a hard assertion.
Seeds are fixed in advance and never tuned.
"""

import math
import statistics
import sys
import time

import numpy as np
import pytest
from scipy import integrate

from wishart_eigs.eigensolve import (
    charpoly_tridiag,
    pencil_root_levels,
    tridiag_eigen_all,
)
from wishart_eigs.ensembles import (
    EnsembleParams,
    build_bidiagonal,
    build_dense,
    build_pencil,
    draw_samples,
    to_tridiagonal,
    variates_per_sample,
)
from wishart_eigs.randstream import RngStream
from wishart_eigs.stats import ks_one_sample, ks_two_sample, moments
from wishart_eigs.theory import (
    DEFAULT_GRID,
    TWGrid,
    TWTable,
    airy_ai,
    log_joint_density,
    pmin_cdf,
    tw2_cdf,
    tw2_moments,
    tw_rescale,
)

REFERENCE_SEED = 1
REFERENCE_SAMPLES = 20000

# collected here and printed by the terminal-summary hook in conftest.py
REPORT_LINES = []


def report(label, passed, detail, soft=False):
    tag = ("SOFT-PASS" if passed else "SOFT-FAIL") if soft else ("PASS" if passed else "FAIL")
    line = f"{tag:9s} {label}: {detail}"
    REPORT_LINES.append(line)
    print(line)
    return passed


@pytest.fixture(scope="module")
def reference_run():
    params = EnsembleParams(30, 30.0, 2.0)
    draw_samples(params, "tridiagonal", 2, 0, which="min")  # compile outside the timed region
    start = time.perf_counter()
    lam_min = draw_samples(params, "tridiagonal", REFERENCE_SAMPLES, REFERENCE_SEED, which="min")[:, 0]
    elapsed = time.perf_counter() - start
    lam_max = draw_samples(params, "tridiagonal", REFERENCE_SAMPLES, REFERENCE_SEED, which="max")[:, 0]
    return lam_min, lam_max, elapsed


def test_criterion_1_smallest_eigenvalue(reference_run):
    lam_min, _, elapsed = reference_run
    ks = ks_one_sample(lam_min, lambda x: pmin_cdf(x, 30), 0.001)
    ok = ks.passed and elapsed <= 60.0
    report(
        "criterion 1 smallest eigenvalue n=R=30",
        ok,
        f"KS D={ks.statistic:.5f} (critical {ks.critical:.5f}), {REFERENCE_SAMPLES} draws in {elapsed:.1f} s",
    )
    assert ok


def test_criterion_2_largest_eigenvalue(reference_run):
    _, lam_max, _ = reference_run
    scaled = tw_rescale(lam_max, 30, 0.0)
    mean, var, _ = moments(scaled)
    sd = math.sqrt(var)
    ref_mean, ref_var = tw2_moments(DEFAULT_GRID)
    ref_sd = math.sqrt(ref_var)
    mean_ok = abs(mean - ref_mean) <= 0.10
    sd_ok = abs(sd - ref_sd) <= 0.05
    ks = ks_one_sample(scaled, TWTable.compute(DEFAULT_GRID).cdf, 0.001)
    report(
        "criterion 2 largest eigenvalue moments",
        mean_ok and sd_ok,
        f"mean {mean:.4f} vs {ref_mean:.4f} (tol 0.10), sd {sd:.4f} vs {ref_sd:.4f} (tol 0.05)",
    )
    report("criterion 2 largest eigenvalue KS vs F2", ks.statistic < 0.03, f"D={ks.statistic:.4f} (soft bound 0.03)", soft=True)
    assert mean_ok and sd_ok


def _same_law(a, b):
    reports = [ks_two_sample(a[:, j], b[:, j], 0.001) for j in range(a.shape[1])]
    return all(r.passed for r in reports), max(r.statistic / r.critical for r in reports)


def test_criterion_3_oracle_equivalence():
    N = 5000
    results = []
    for k, (n, R, beta) in enumerate([(3, 5.0, 2.0), (2, 4.0, 1.0)]):
        p = EnsembleParams(n, R, beta)
        tri = draw_samples(p, "tridiagonal", N, 300 + k)
        results.append((f"dense vs tridiagonal {n, R, beta}", *_same_law(draw_samples(p, "dense", N, 310 + k), tri)))
        results.append((f"pencil vs tridiagonal {n, R, beta}", *_same_law(draw_samples(p, "pencil", N, 320 + k), tri)))
    p = EnsembleParams(2, 4.0, 2.0)
    results.append(
        ("closed2 vs tridiagonal (2, 4, 2)", *_same_law(draw_samples(p, "closed2", N, 330), draw_samples(p, "tridiagonal", N, 331)))
    )
    ok = all(r[1] for r in results)
    detail = "; ".join(f"{name} max D/crit={ratio:.2f}" for name, _, ratio in results)
    report("criterion 3 oracle equivalence", ok, detail)
    assert ok


def test_criterion_4_spike_consistency():
    N = 10**4
    base = EnsembleParams(4, 8.0, 2.0)
    same, ratio = _same_law(
        draw_samples(EnsembleParams(4, 8.0, 2.0, 1.0), "pencil", N, 400), draw_samples(base, "tridiagonal", N, 401)
    )
    means = [
        float(draw_samples(EnsembleParams(4, 8.0, 2.0, s), "pencil", N, 410 + i, which="max").mean())
        for i, s in enumerate((1.0, 2.0, 4.0))
    ]
    monotone = all(a <= b for a, b in zip(means, means[1:]))
    ok = same and monotone
    report(
        "criterion 4 spike consistency",
        ok,
        f"sigma1=1 pencil vs unspiked max D/crit={ratio:.2f}; E[lambda_1] at sigma1=1,2,4: "
        + ", ".join(f"{m:.3f}" for m in means),
    )
    assert ok


def test_criterion_5_trace_law():
    n, R, N = 4, 6.0, 10**4
    traces = draw_samples(EnsembleParams(n, R, 2.0), "tridiagonal", N, 500).sum(axis=1)
    mean = traces.mean()
    var = traces.var(ddof=1)
    mean_ok = abs(mean - n * R) <= 3 * math.sqrt(n * R / N)
    var_ok = abs(var - n * R) <= 0.10 * n * R
    report("criterion 5 trace law", mean_ok and var_ok, f"mean {mean:.4f} vs {n * R:.0f}, variance {var:.3f} vs {n * R:.0f}")
    assert mean_ok and var_ok


def test_criterion_6_recurrence_consistency():
    rng = np.random.default_rng(600)
    worst = 0.0
    for i in range(100):
        n = int(rng.integers(1, 21))
        params = EnsembleParams(n, n + rng.uniform(0.0, 10.0), float(rng.choice([1.0, 2.0, 0.5, 4.0])))
        T = to_tridiagonal(build_bidiagonal(params, RngStream(601, i)))
        lam = tridiag_eigen_all(T).values
        span = lam[0] - lam[-1] + 1.0
        for x in rng.uniform(lam[-1] - 0.1 * span, lam[0] + 0.1 * span, 5):
            exact = np.prod(x - lam)
            worst = max(worst, abs(charpoly_tridiag(T, x).value - exact) / np.prod(np.abs(x - lam)))
    tri_ok = worst < 1e-8

    interlace_ok = True
    worst_trace = 0.0
    for i in range(100):
        n = int(rng.integers(2, 11))
        params = EnsembleParams(n, n + rng.uniform(0.0, 10.0), 2.0)
        P = build_pencil(params, RngStream(602, i))
        levels = pencil_root_levels(P, tol=1e-16)
        for lower, upper in zip(levels[:-1], levels[1:]):
            interlace_ok &= bool(np.all(upper[:-1] < lower) and np.all(lower < upper[1:]))
        total = P.a_tilde.sum() + P.b_tilde.sum()
        worst_trace = max(worst_trace, abs(levels[-1].sum() - total) / total)
    ok = tri_ok and interlace_ok and worst_trace < 1e-8
    report(
        "criterion 6 recurrence/spectrum consistency",
        ok,
        f"worst P_n relative error {worst:.2e}; strict interlacing {interlace_ok}; worst pencil trace error {worst_trace:.2e}",
    )
    assert ok


def test_criterion_7_density_normalisation():
    totals = {}
    p = EnsembleParams(1, 2.0)
    totals[(1, 2)] = integrate.quad(lambda x: math.exp(log_joint_density([x], p).value), 0, np.inf, epsabs=1e-12)[0]
    p = EnsembleParams(2, 3.0)
    totals[(2, 3)] = integrate.dblquad(
        lambda l2, l1: math.exp(log_joint_density([l1, l2], p).value) if l1 > l2 > 0 else 0.0,
        0,
        np.inf,
        0,
        lambda l1: l1,
        epsabs=1e-12,
        epsrel=1e-10,
    )[0]
    ok = all(abs(v - 1.0) <= 1e-6 for v in totals.values())
    report("criterion 7 density normalisation", ok, ", ".join(f"(n,R)={k}: {v:.10f}" for k, v in totals.items()))
    assert ok


def test_criterion_8_tracy_widom_evaluator():
    s = np.linspace(-10.0, 6.0, 65)
    worst = {}
    for m in (32, 64, 128):
        worst[m] = float(np.max(np.abs(tw2_cdf(s, TWGrid(m)) - tw2_cdf(s, TWGrid(2 * m)))))
    ai_err = abs(airy_ai(0.0) - 3 ** (-2 / 3) / math.gamma(2 / 3))
    ok = all(v < 1e-6 for v in worst.values()) and ai_err < 1e-10
    report(
        "criterion 8 Tracy-Widom evaluator",
        ok,
        ", ".join(f"|F(m={m}) - F(m={2 * m})| <= {v:.1e}" for m, v in worst.items()) + f"; Ai(0) error {ai_err:.1e}",
    )
    assert ok


def _seconds_per_sample(params, method, count, seed, **kwargs):
    draw_samples(params, method, 1, seed, start_index=10**9, **kwargs)
    runs = []
    for rep in range(3):
        start = time.perf_counter()
        draw_samples(params, method, count, seed, start_index=rep * count, **kwargs)
        runs.append((time.perf_counter() - start) / count)
    return statistics.median(runs)


def test_criterion_9_efficiency():
    counts_ok = True
    for n, R, beta in [(1, 1.0, 2.0), (5, 7.0, 2.0), (30, 30.0, 2.0), (6, 9.0, 1.0)]:
        p = EnsembleParams(n, R, beta)
        rng = RngStream(900)
        build_bidiagonal(p, rng)
        counts_ok &= rng.variates == 2 * n - 1 == variates_per_sample(p, "tridiagonal")
        rng = RngStream(900)
        build_pencil(p, rng)
        counts_ok &= rng.variates == 2 * n - 1 == variates_per_sample(p, "pencil")
        rng = RngStream(900)
        build_dense(p, rng)
        counts_ok &= rng.variates == int(beta * R * n) == variates_per_sample(p, "dense")
    report("criterion 9 variate accounting", counts_ok, "structured 2n-1, dense beta*R*n on four parameter sets")

    p = EnsembleParams(256, 256.0, 2.0)
    structured = _seconds_per_sample(p, "tridiagonal", 20, 901)
    dense = _seconds_per_sample(p, "dense", 10, 902, dense_solver="lapack")
    ratio = dense / structured
    report(
        "criterion 9 speed at n=R=256",
        ratio >= 10.0,
        f"tridiagonal {structured * 1e3:.2f} ms, dense {dense * 1e3:.2f} ms per sample, ratio {ratio:.1f}x (soft bound 10x)",
        soft=True,
    )
    assert counts_ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
