"""Acceptance gate: one PASS/FAIL line per criterion in the terminal summary."""

import math
import time


from degseq import estimate_p_simple, generate, log_g, FamilySpec
from degseq.estimator import sum_log1p_lambda
from degseq.moments import moments
from degseq.suites import (
    suite_inequalities, suite_omega_star, suite_s_formula, suite_switching,
)
from degseq.oracle import count_simple_graphs, enumerate_pairings, sequences_upto, stat_Y, stat_Y2
from degseq.core import falling, validate_sequence
from fractions import Fraction

CROSS_C = 10.0


def _timed(fn, *a, **kw):
    t0 = time.perf_counter()
    out = fn(*a, **kw)
    return out, time.perf_counter() - t0


def test_1_oracle_identities(record):
    bad, count = [], 0
    t0 = time.perf_counter()
    for raw in sequences_upto(14, 6):
        d = validate_sequence(raw)
        rep = enumerate_pairings(d)
        g_bt = count_simple_graphs(d)
        count += 1
        phi = math.prod(range(d.m1 - 1, 0, -2))
        if rep.g != g_bt or rep.simple_pairings != g_bt * rep.prod_factorials or sum(rep.census.values()) != phi:
            bad.append(raw)
    dt = time.perf_counter() - t0
    ok = not bad and dt < 300
    record(1, "oracle identities, n<=6, M1<=14", ok, f"{count} sequences, {dt:.1f}s")
    assert not bad, bad[:5]
    assert dt < 300


def test_2_expectation_identities(record):
    bad, count = [], 0
    t0 = time.perf_counter()
    for raw in sequences_upto(12):
        d = validate_sequence(raw)
        stats = {}
        for u in range(d.n):
            for v in range(u + 1, d.n):
                stats[("Y", u, v)] = stat_Y(u, v)
                stats[("Y2", u, v)] = stat_Y2(u, v)
        rep = enumerate_pairings(d, statistics=stats)
        count += 1
        m1 = d.m1
        for u in range(d.n):
            for v in range(u + 1, d.n):
                if rep.expectations[("Y", u, v)] != Fraction(d[u] * d[v], m1 - 1):
                    bad.append((raw, u, v, "Y"))
                want = (Fraction(falling(d[u], 2) * falling(d[v], 2), (m1 - 1) * (m1 - 3))
                        if m1 > 3 else Fraction(0))
                if rep.expectations[("Y2", u, v)] != want:
                    bad.append((raw, u, v, "Y2"))
    dt = time.perf_counter() - t0
    record(2, "exact pair expectations, M1<=12", not bad and dt < 60, f"{count} sequences, {dt:.1f}s")
    assert not bad, bad[:5]
    assert dt < 60


def test_3_monte_carlo_vs_formula(record):
    d = validate_sequence([3] * 1000)
    mc, dt = _timed(estimate_p_simple, d, 200_000, seed=20240601)
    M1, M2, M3 = (float(x) for x in moments(d, 3).M[:3])
    exponent = -M1 / 2 + M2 / (2 * M1) - M3 / (3 * M1**2) + 0.75 + sum_log1p_lambda(d)
    p_formula = math.exp(exponent)
    # cross-check against the estimator's own breakdown
    assert math.isclose(log_g(d).log_p_simple(), exponent, rel_tol=0, abs_tol=1e-9)
    target = math.exp(-2)
    agree = abs(mc.p_hat - p_formula) <= 3 * mc.half_width
    near = abs(mc.p_hat - target) <= 0.05 * target and abs(p_formula - target) <= 0.05 * target
    ok = agree and near and dt < 120
    record(3, "Monte Carlo vs formula, 3-regular n=1000", ok,
           f"p_hat={mc.p_hat:.5f}, formula={p_formula:.5f}, half-width={mc.half_width:.5f}, {dt:.1f}s")
    assert agree and near and dt < 120


def test_4_s_ladder(record):
    res, dt = _timed(suite_s_formula)
    ladder = [c for c in res.checks if c.label.startswith("3-regular") or "decreasing" in c.label]
    ok = all(c.ok for c in ladder) and dt < 60
    record(4, "S convergence ladder, C=10", ok, "; ".join(c.detail for c in ladder if c.detail))
    assert ok, [c for c in ladder if not c.ok]


def test_5_switching(record):
    res, dt = _timed(suite_switching, 10)
    ok = res.ok and dt < 180
    record(5, "switching suite at M1<=10", ok, f"{dt:.1f}s; " + res.checks[0].detail.split(";")[0])
    assert res.ok, res.failures
    assert dt < 180


def test_6_inequalities(record):
    res, dt = _timed(suite_inequalities, 1000)
    ok = res.ok and dt < 60
    record(6, "inequality batteries, 1000 random sequences", ok,
           f"{dt:.1f}s; " + "; ".join(c.detail for c in res.checks if c.detail))
    assert res.ok, res.failures
    assert dt < 60


def test_7_omega_star(record):
    res, dt = _timed(suite_omega_star)
    ok = res.ok and dt < 60
    record(7, "product-space signature law", ok,
           f"{dt:.1f}s; " + "; ".join(c.detail for c in res.checks if c.detail))
    assert res.ok, res.failures
    assert dt < 60


def test_8_cross_theorem(record):
    t0 = time.perf_counter()
    n = 10_000
    d_pl = generate(FamilySpec("powerlaw", n, gamma=2.6))
    pl = log_g(d_pl, "powerlaw", gamma=2.6)
    gen = log_g(d_pl, "general")
    r_pl = abs(pl.log_value - gen.log_value) / pl.sqrt_xi

    Delta, ell = math.floor(n**0.45), math.floor(n**0.2)
    d_bv = generate(FamilySpec("bivalued", n, delta=3, Delta=Delta, ell=ell))
    bv = log_g(d_bv, "bivalued")
    gen_bv = log_g(d_bv, "general")
    r_bv = abs(bv.log_value - gen_bv.log_value) / bv.sqrt_xi
    dt = time.perf_counter() - t0
    assert bv.extra["case"] == "a"
    ok = r_pl <= CROSS_C and r_bv <= CROSS_C and dt < 60
    record(8, "cross-theorem consistency, C=10", ok,
           f"powerlaw |diff|/sqrt(xi)={r_pl:.4f}, bivalued={r_bv:.4f}, {dt:.1f}s")
    assert ok
