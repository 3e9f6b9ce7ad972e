"""Invariant batteries shared by ``degseq verify`` and the test-suite."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import SignatureMatrix, falling, validate_sequence
from .errbounds import xi_general
from .estimator import A_ij, B_i, F_of_M, log_S_closed, log_S_direct
from .moments import moments, split, split_table, u_functionals, u_functionals_naive
from .oracle import (
    count_simple_graphs, enumerate_pairings, sequences_upto, stat_Y, stat_Y2, stat_Z,
)
from .pairing_model import offdiag_masses, poisson_tail, sample_offdiag

# Frozen constants; provenance in the ledger.
S_LADDER = (250, 500, 1000, 2000)
S_LADDER_C = 10.0
EZ_OVER_U2_C = Fraction(16, 3)  # attained at d=(2,2); every other M1<=12 sequence is <= 3


@dataclass
class Check:
    label: str
    ok: bool
    detail: str = ""


@dataclass
class SuiteResult:
    name: str
    checks: list[Check] = field(default_factory=list)

    def add(self, label: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(label, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def to_json(self) -> dict:
        return {"suite": self.name, "ok": self.ok, "checks": len(self.checks),
                "failures": [c.__dict__ for c in self.failures[:50]],
                "details": [c.__dict__ for c in self.checks if c.detail][:50]}


# --- moments ------------------------------------------------------------------


def suite_moments(max_n: int = 12, random_cases: int = 200, seed: int = 7) -> SuiteResult:
    """Histogram path against the naive triple loop, plus moment invariants."""
    res = SuiteResult("moments")
    rng = random.Random(seed)
    cases = [s for s in sequences_upto(12, even_only=False) if len(s) <= max_n]
    cases += [tuple(rng.randint(1, 8) for _ in range(rng.randint(1, max_n))) for _ in range(random_cases)]
    bad = 0
    for raw in cases:
        d = validate_sequence(raw)
        for strict in (False, True):
            if u_functionals(d, exact=True, strict=strict) != u_functionals_naive(d, strict=strict):
                bad += 1
        mp = moments(d, 6)
        M = mp.M
        if M[0] < d.n or any(x < 0 for x in M):
            bad += 1
        if any(M[k] > (d.max_degree - k) * M[k - 1] for k in range(1, 6)):
            bad += 1
        U = u_functionals(d, exact=True)
        if any(x < 0 for x in U):
            bad += 1
        for h in (0, d.n // 2, d.n):
            H, L = split(d, h, 4)
            if any(H[k] + L[k] != M[k] for k in range(4)):
                bad += 1
            if U.U1 > Fraction(L[2], M[0]) + H[0]:
                bad += 1
    res.add("histogram == naive, invariants", bad == 0, f"{len(cases)} sequences, {bad} violations")
    return res


# --- inequality battery -------------------------------------------------------


def random_mixed_sequence(rng: np.random.Generator, max_n: int = 10_000) -> tuple[int, ...]:
    """One sequence from a mixed bag of families with log-uniform ``n``."""
    n = int(round(math.exp(rng.uniform(math.log(2), math.log(max_n)))))
    kind = rng.integers(5)
    if kind == 0:
        d = np.full(n, rng.integers(1, 8))
    elif kind == 1:
        d = rng.integers(1, max(2, int(math.sqrt(n)) + 2), size=n)
    elif kind == 2:
        g = rng.uniform(1.5, 3.5)
        d = np.minimum(np.floor(rng.pareto(g - 1, size=n) + 1), n - 1 if n > 1 else 1).astype(int)
    elif kind == 3:
        hi = int(rng.integers(2, max(3, n // 2 + 2)))
        lo = int(rng.integers(1, hi + 1))
        ell = int(rng.integers(0, n + 1))
        d = np.array([hi] * ell + [lo] * (n - ell))
    else:
        d = rng.poisson(rng.uniform(0.5, 6), size=n) + 1
    d = np.maximum(d, 1)
    return tuple(int(x) for x in d)


def _inequality_violations(raw) -> tuple[int, int]:
    """Exact integer-scaled checks at every split index; returns (checks, violations)."""
    d = validate_sequence(raw)
    mp = moments(d, 4)
    M1, M2, M3, M4 = mp.M
    U = u_functionals(d, exact=True)
    tab = split_table(d, 4)
    n = d.n
    checks = viol = 0

    def chk(ok: bool) -> None:
        nonlocal checks, viol
        checks += 1
        viol += not ok

    # first-argument and second-argument bounds of the min terms
    chk(U.U1 <= Fraction(M3, M1))
    chk(U.U2 <= Fraction(M2 * M2, M1 * M1))
    chk(U.U2 <= Fraction(M1, 2))
    chk(U.U3 <= Fraction(M2 * M3 * M4, M1**4))
    chk(U.U4 <= Fraction(M3 * M2, M1**2))
    chk(U.U5 <= Fraction(M2 * M2 * M3, M1**4))
    chk(U.U6 <= Fraction(M3 * M3, M1**2))
    chk(U.U7 <= Fraction(M3 * M2, M1**3))

    u1 = U.U1 * M1
    u2 = U.U2 * M1**2
    u4 = U.U4 * M1**2
    assert u1.denominator == u2.denominator == u4.denominator == 1
    u1, u2, u4 = int(u1), int(u2), int(u4)
    for h in range(n + 1):
        H1, H2, H3 = tab[0][h], tab[1][h], tab[2][h]
        L1, L2, L3 = M1 - H1, M2 - H2, M3 - H3
        chk(u1 <= L3 + H1 * M1)
        chk(u2 <= L2 * M2 + H1 * H1 * M1)
        chk(u4 <= L3 * M2 + H3 * L2 + H2 * H1 * M1)
        if h >= 1 and d[h - 1] >= 2:
            dh = d[h - 1] - 2
            if L2 > 0:
                chk(L3 <= dh * L2)
            if H2 > 0:
                chk(dh * H2 <= H3)
    return checks, viol


def suite_inequalities(cases: int = 1000, seed: int = 2024, max_n: int = 10_000) -> SuiteResult:
    res = SuiteResult("inequalities")
    rng = np.random.default_rng(seed)
    total = bad = 0
    for _ in range(cases):
        c, v = _inequality_violations(random_mixed_sequence(rng, max_n))
        total += c
        bad += v
    res.add("proof-level inequalities", bad == 0, f"{cases} sequences, {total} checks, {bad} violations")
    return res


# --- S formula ----------------------------------------------------------------


def all_signatures(d):
    """Every entrywise-valid signature of a small sequence."""
    d = validate_sequence(d)
    n = d.n
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    off = [[0] + list(range(2, min(d[i], d[j]) + 1)) for i, j in pairs]
    diag = [list(range(d[i] // 2 + 1)) for i in range(n)]
    for ms in itertools.product(*off):
        multis = {pr: m for pr, m in zip(pairs, ms) if m}
        for ls in itertools.product(*diag):
            yield SignatureMatrix({i: m for i, m in enumerate(ls) if m}, multis)


def suite_s_formula(ladder=S_LADDER, C: float = S_LADDER_C) -> SuiteResult:
    res = SuiteResult("s-formula")
    gaps = []
    for n in ladder:
        d = [3] * n
        gap = abs(log_S_direct(d) - log_S_closed(d))
        bound = xi_general(d).value + 1 / (3 * n)
        gaps.append(gap)
        res.add(f"3-regular n={n}: gap <= {C}*(xi+1/M1)", math.isfinite(gap) and gap <= C * bound,
                f"gap={gap:.6g}, xi+1/M1={bound:.6g}, ratio={gap / bound:.4f}")
    res.add("gap decreasing along the ladder", all(a > b for a, b in zip(gaps, gaps[1:])))
    for raw in [(2, 2), (3, 3), (3, 2, 1), (2, 2, 2), (3, 3, 2, 2), (2, 2, 1, 1), (3, 1, 1, 1)]:
        d = validate_sequence(raw)
        tot = math.fsum(F_of_M(M, d) for M in all_signatures(d))
        S = math.exp(log_S_direct(d))
        res.add(f"sum of F over signatures equals S for {raw}", math.isclose(tot, S, rel_tol=1e-12),
                f"sum F={tot:.15g}, S={S:.15g}")
    res.add("A(2,2;4)=1.0625, B(2;4)=1.25", math.isclose(A_ij(2, 2, 4), 1.0625) and math.isclose(B_i(2, 4), 1.25))
    return res


# --- product-space signature law --------------------------------------------


def ratio_grid(points: int = 1000, seed: int = 11):
    rng = np.random.default_rng(seed)
    for _ in range(points):
        di, dj = (int(x) for x in rng.integers(2, 40, size=2))
        m1 = int(rng.integers(di + dj, 4000))
        m1 += m1 % 2
        yield di, dj, m1


def suite_omega_star(draws: int = 100_000, seed: int = 3) -> SuiteResult:
    res = SuiteResult("omega-star")
    worst = 0.0
    bad = 0
    for di, dj, m1 in ratio_grid():
        p = offdiag_masses(di, dj, m1)
        lam = di * dj / m1
        for m in range(3, min(di, dj) + 1):
            if p[m - 1] > 0:
                r = p[m] / p[m - 1]
                worst = max(worst, r / (lam / m))
                bad += r > lam / m * (1 + 1e-12)
    res.add("P(X=m)/P(X=m-1) <= lambda/m for m>=3 on the grid", bad == 0, f"max ratio/(lambda/m) = {worst:.6g}")

    x = sample_offdiag(2, 2, 4, draws, seed)
    target = 1 / 17
    phat = float(np.mean(x == 2))
    sigma = math.sqrt(target * (1 - target) / draws)
    res.add("d=(2,2): empirical P(X12=2) within 3 sigma of 1/17", abs(phat - target) <= 3 * sigma,
            f"p_hat={phat:.6f}, target={target:.6f}, sigma={sigma:.2e}")

    dom_bad = 0
    for n in (2, 4, 10, 100, 1000):
        m1 = 5 * n
        p = offdiag_masses(5, 5, m1)
        lam = 25 / m1
        for m in range(2, 6):
            dom_bad += p[m:].sum() > poisson_tail(lam, m)
    res.add("d=(5,...,5): P(X>=m) <= P(Po(lambda)>=m), m=2..5", dom_bad == 0)
    return res


# --- oracle identities ----------------------------------------------------------


def suite_oracle_identities(max_n: int = 6, max_m1: int = 14, expect_m1: int = 12) -> SuiteResult:
    res = SuiteResult("oracle-identities")
    bad = []
    count = 0
    for raw in sequences_upto(max_m1, max_n):
        d = validate_sequence(raw)
        rep = enumerate_pairings(d)
        count += 1
        phi_closed = math.prod(range(d.m1 - 1, 0, -2))
        g_bt = count_simple_graphs(d)
        if sum(rep.census.values()) != phi_closed or rep.phi != phi_closed:
            bad.append((raw, "sum census != (M1-1)!!"))
        if rep.simple_pairings != g_bt * rep.prod_factorials:
            bad.append((raw, "census[M_S] != g * prod d_i!"))
        if rep.g != g_bt:
            bad.append((raw, "oracles disagree on g"))
    res.add(f"two oracles agree, n<={max_n}, M1<={max_m1}", not bad, f"{count} sequences; {bad[:3]}")

    bad = []
    count = 0
    for raw in sequences_upto(expect_m1):
        d = validate_sequence(raw)
        m1 = d.m1
        stats = {}
        for u in range(d.n):
            for v in range(u + 1, d.n):
                stats[f"Y{u},{v}"] = stat_Y(u, v)
                stats[f"YY{u},{v}"] = stat_Y2(u, v)
        stats["Z"] = stat_Z
        rep = enumerate_pairings(d, statistics=stats)
        count += 1
        for u in range(d.n):
            for v in range(u + 1, d.n):
                if rep.expectations[f"Y{u},{v}"] != Fraction(d[u] * d[v], m1 - 1):
                    bad.append((raw, u, v, "E[Y]"))
                e2 = Fraction(falling(d[u], 2) * falling(d[v], 2), (m1 - 1) * (m1 - 3)) if m1 > 3 else Fraction(0)
                if rep.expectations[f"YY{u},{v}"] != e2:
                    bad.append((raw, u, v, "E[[Y]_2]"))
        u2 = u_functionals(d, exact=True).U2
        if rep.expectations["Z"] > EZ_OVER_U2_C * u2:
            bad.append((raw, "E[Z] > C*U2"))
    res.add(f"pair expectation identities, M1<={expect_m1}", not bad, f"{count} sequences; {bad[:3]}")
    return res


def suite_switching(max_m1: int = 10) -> SuiteResult:
    from .switching import census_ratio, star_split, switching_suite

    res = SuiteResult("switching")
    rep = switching_suite(max_m1)
    res.add(f"round trip, postcondition, incidence counts at M1<={max_m1}", rep.ok,
            f"{rep.sequences} sequences, {rep.pairings} pairings, {rep.forward_good} good forward; "
            f"{rep.failures[:3]}")
    dev = []
    for k in range(2, 7):
        cr = census_ratio([2, 2] + [1] * (2 * k), 0, 1, 2)
        if k <= 3:
            res.add(f"rho_2 = 1/(2k(k-1)) at k={k}", cr.exact == Fraction(1, 2 * k * (k - 1)), str(cr.exact))
        dev.append(abs(cr.relative - 1))
        if k <= 3:
            star, c0, c1 = star_split([2, 2] + [1] * (2 * k), 0, 1)
            res.add(f"|C(M(star))| = |C(M(0))| + |C(M(1))| at k={k}", star == c0 + c1, f"{star}={c0}+{c1}")
    res.add("|exact/prediction - 1| decreasing for k=2..6", all(a > b for a, b in zip(dev, dev[1:])),
            ", ".join(f"{x:.4f}" for x in dev))
    return res


SUITES = {
    "moments": suite_moments,
    "switching": suite_switching,
    "s-formula": suite_s_formula,
    "omega-star": suite_omega_star,
    "oracle-identities": suite_oracle_identities,
    "inequalities": suite_inequalities,
}
