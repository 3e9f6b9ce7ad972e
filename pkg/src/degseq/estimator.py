"""Counting formulas for graphs with a given degree sequence.

All counts are carried as natural logarithms.  The exact big-integer path is
limited to the number of perfect matchings ``(M1 - 1)!!``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import DegreeSequence, SignatureMatrix, falling, validate_sequence
from .errbounds import (
    check_theorem4_params, xi_bounds_suite, xi_general, xi_theorem1, xi_theorem3, xi_theorem4,
)
from .errors import HypothesisViolation, InvalidSignature, OddTotalDegree
from .moments import moments

EXACT_PHI_MAX = 10_000
SERIES_RTOL = 1e-30
METHODS = ("general", "m2", "powerlaw", "bivalued", "longtail")
DEFAULT_XI_MAX = 0.25


def double_factorial_odd(m1: int) -> int:
    """``(m1 - 1)!!`` for even ``m1``, i.e. ``m1! / (2^{m1/2} (m1/2)!)``."""
    out = 1
    for k in range(m1 - 1, 0, -2):
        out *= k
    return out


def log_phi(m1: int) -> tuple[float, int | None]:
    """Log of the number of perfect matchings on ``m1`` points, plus the exact
    count when ``m1 <= 10^4``."""
    if m1 < 0 or m1 % 2:
        raise OddTotalDegree(f"M1={m1} must be even and non-negative")
    log = math.lgamma(m1 + 1) - (m1 / 2) * math.log(2) - math.lgamma(m1 / 2 + 1)
    exact = double_factorial_odd(m1) if m1 <= EXACT_PHI_MAX else None
    return log, exact


def sum_log_factorials(d) -> float:
    d = validate_sequence(d)
    return math.fsum(c * math.lgamma(a + 1) for a, c in d.histogram)


def _pair_sum(d: DegreeSequence, f) -> float:
    """``sum_{i<j} f(d_i, d_j)`` over the distinct-degree histogram."""
    hist = d.histogram
    parts = []
    for x, (a, ca) in enumerate(hist):
        if ca >= 2:
            parts.append(ca * (ca - 1) / 2 * f(a, a))
        for b, cb in hist[x + 1:]:
            parts.append(ca * cb * f(a, b))
    return math.fsum(parts)


def sum_log1p_lambda(d) -> float:
    d = validate_sequence(d)
    m1 = d.m1
    return _pair_sum(d, lambda a, b: math.log1p(a * b / m1))


def sum_log1p_lambda_naive(d) -> float:
    d = validate_sequence(d)
    x, m1 = d.degrees, d.m1
    return math.fsum(math.log1p(x[i] * x[j] / m1)
                     for i in range(d.n) for j in range(i + 1, d.n))


def _log_series(step, max_terms: int) -> float:
    """Log of ``sum_m t_m`` with ``t_0 = 1`` and ``t_m = t_{m-1} * step(m)``.

    Runs in log space; stops at natural truncation (``step == 0``) or once the
    ratio is below 1 and the term is below ``SERIES_RTOL`` of the partial sum.
    """
    logs = [0.0]
    lt = 0.0
    lmax = 0.0
    for m in range(1, max_terms + 1):
        r = step(m)
        if r <= 0:
            break
        lt += math.log(r)
        logs.append(lt)
        lmax = max(lmax, lt)
        if r < 1 and lt - lmax < math.log(SERIES_RTOL):
            break
    return lmax + math.log(math.fsum(math.exp(v - lmax) for v in logs))


def log_A_ij(di: int, dj: int, m1: int) -> float:
    """``log A_ij``: the normalising mass of an off-diagonal entry."""
    if m1 <= 0:
        raise ValueError("M1 must be positive")
    num = _log_series(lambda m: (di - m + 1) * (dj - m + 1) / (m * m1), min(di, dj))
    return num - math.log1p(di * dj / m1)


def log_B_i(di: int, m1: int) -> float:
    if m1 <= 0:
        raise ValueError("M1 must be positive")
    return _log_series(lambda m: (di - 2 * m + 2) * (di - 2 * m + 1) / (2 * m1 * m), di // 2)


def A_ij(di: int, dj: int, m1: int) -> float:
    return math.exp(log_A_ij(di, dj, m1))


def B_i(di: int, m1: int) -> float:
    return math.exp(log_B_i(di, m1))


def offdiag_weight(di: int, dj: int, m: int, m1: int) -> float:
    """Unnormalised weight of multiplicity ``m >= 2`` on a pair."""
    return falling(di, m) * falling(dj, m) / (math.factorial(m) * m1**m) / (1 + di * dj / m1)


def loop_weight(di: int, m: int, m1: int) -> float:
    return falling(di, 2 * m) / ((2 * m1) ** m * math.factorial(m))


def F_of_M(M: SignatureMatrix, d) -> float:
    """Product weight of a signature (empty signature has weight 1)."""
    d = validate_sequence(d)
    try:
        M.check_for(d)
    except InvalidSignature:
        raise
    m1 = d.m1
    out = 1.0
    for (i, j), m in M.multis.items():
        out *= offdiag_weight(d[i], d[j], m, m1)
    for i, m in M.loops.items():
        out *= loop_weight(d[i], m, m1)
    return out


def log_S_direct(d) -> float:
    """``sum_{i<j} log A_ij + sum_i log B_i`` over the histogram."""
    d = validate_sequence(d)
    m1 = d.m1
    cache: dict = {}

    def f(a, b):
        if (a, b) not in cache:
            cache[(a, b)] = log_A_ij(a, b, m1)
        return cache[(a, b)]

    pairs = _pair_sum(d, f)
    diag = math.fsum(c * log_B_i(a, m1) for a, c in d.histogram)
    return pairs + diag


def log_S_closed(d) -> float:
    d = validate_sequence(d)
    M1, M2, M3 = (float(x) for x in moments(d, 3).M)
    return M1 / 2 - M2 / (2 * M1) + M3 / (3 * M1**2) - 0.75 - sum_log1p_lambda(d)


@dataclass
class LogEstimate:
    log_value: float
    breakdown: dict[str, float]
    xi: float
    method: str
    hypotheses: dict[str, bool] = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def log10_value(self) -> float:
        return self.log_value / math.log(10)

    @property
    def sqrt_xi(self) -> float:
        return math.sqrt(self.xi)

    @property
    def hypotheses_ok(self) -> bool:
        return all(self.hypotheses.values())

    def log_p_simple(self) -> float:
        """Implied log probability that the pairing model gives a simple graph."""
        return self.log_value - self.breakdown["log_phi"] - self.breakdown["-sum log d_i!"]

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "log_g": self.log_value,
            "log10_g": self.log10_value,
            "log_p_simple": self.log_p_simple(),
            "breakdown": self.breakdown,
            "xi": self.xi,
            "sqrt_xi": self.sqrt_xi,
            "hypotheses": self.hypotheses,
            "extra": self.extra,
        }


def _base_terms(d: DegreeSequence) -> dict[str, float]:
    lp, _ = log_phi(d.m1)
    return {"log_phi": lp, "-sum log d_i!": -sum_log_factorials(d)}


def _finish(d, terms, xi, method, hypotheses, force, extra=None) -> LogEstimate:
    failed = [k for k, ok in hypotheses.items() if not ok]
    if failed and not force:
        raise HypothesisViolation(f"method {method!r}: hypotheses fail: {', '.join(failed)}", failed)
    return LogEstimate(math.fsum(terms.values()), terms, xi, method, hypotheses, extra or {})


def log_g(d, method: str = "general", *, force: bool = False, xi_max: float = DEFAULT_XI_MAX,
          slack: float = 1.0, gamma: float | None = None, alpha: float | None = None,
          beta: float | None = None) -> LogEstimate:
    """Log of the asymptotic number of simple graphs with degree sequence ``d``.

    Methods:
      general   full exponent with the ``U``-based xi.
      m2        same exponent, xi from ``M1`` and ``M2`` only.
      powerlaw  Taylor-expanded pair sum with ``M4``/``M6`` corrections; the
                short form is reported in ``extra``.
      bivalued  exponent without the ``M3`` term, degrees in ``{delta, Delta}``.
      longtail  full exponent with xi from ``(alpha, beta, gamma)``.

    A failed hypothesis raises :class:`HypothesisViolation` unless ``force``.
    """
    d = validate_sequence(d)
    if not d.even:
        raise OddTotalDegree(f"total degree M1={d.m1} is odd")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    mp = moments(d, 6)
    M1, M2, M3, M4, _, M6 = (float(x) for x in mp.M)
    terms = _base_terms(d)

    if method in ("general", "m2", "longtail"):
        terms.update({
            "-M1/2": -M1 / 2,
            "M2/2M1": M2 / (2 * M1),
            "-M3/3M1^2": -M3 / (3 * M1**2),
            "3/4": 0.75,
            "sum log(1+lambda)": sum_log1p_lambda(d),
        })
    if method == "general":
        xi = xi_general(d).value
        return _finish(d, terms, xi, method, {"xi<=xi_max": xi <= xi_max}, force)
    if method == "m2":
        t = xi_theorem1(d, xi_max=xi_max)
        return _finish(d, terms, t.value, method, t.checks, force,
                       {"M2/M1^(9/8)": M2 / M1**1.125})
    if method == "longtail":
        if None in (alpha, beta, gamma):
            raise ValueError("longtail needs alpha, beta and gamma")
        try:
            t = xi_theorem4(d.n, alpha, beta, gamma, xi_max=xi_max)
        except HypothesisViolation:
            if not force:
                raise
            check = {"parameters": False}
            xi = float(d.n) ** (5 * alpha + beta + 6 * beta / gamma - 3) if gamma > 2 \
                else float(d.n) ** (5 * alpha + 8 * beta / gamma - 3)
            return _finish(d, terms, xi, method, check, True)
        return _finish(d, terms, t.value, method, t.checks, force)

    if method == "powerlaw":
        Ms2, Ms3 = M2 + M1, M3 + M1
        xi = Ms3 * Ms2**2 / M1**4
        terms.update({
            "-M2/2M1": -M2 / (2 * M1),
            "-M2^2/4M1^2": -M2**2 / (4 * M1**2),
            "M3^2/6M1^3": M3**2 / (6 * M1**3),
            "M4/4M1^2": M4 / (4 * M1**2),
            "-M4^2/8M1^4": -M4**2 / (8 * M1**4),
            "-M6/6M1^3": -M6 / (6 * M1**3),
        })
        short = (terms["log_phi"] + terms["-sum log d_i!"] + terms["-M2/2M1"]
                 + terms["-M2^2/4M1^2"] + terms["M3^2/6M1^3"])
        hyp = {"Delta<=M1^(2/5)": d.max_degree <= slack * M1**0.4, "xi<=xi_max": xi <= xi_max}
        extra = {"log_value_short": short}
        if gamma is not None:
            hyp["gamma>5/2"] = gamma > 2.5
            extra["short_form_error_order"] = float(d.n) ** (5 / gamma - 2)
            extra["envelope_constant"] = powerlaw_envelope_constant(d, gamma)
        return _finish(d, terms, xi, method, hyp, force, extra)

    # bivalued
    values = [a for a, _ in d.histogram]
    if len(values) > 2:
        if not force:
            raise HypothesisViolation(f"bivalued needs at most two distinct degrees, got {len(values)}",
                                      ["two distinct degrees"])
    Delta, delta = values[0], values[-1]
    ell = dict(d.histogram)[Delta] if len(values) == 2 else d.n
    terms = {
        "log_phi": terms["log_phi"],
        "-sum log d_i!": -(ell * math.lgamma(Delta + 1) + (d.n - ell) * math.lgamma(delta + 1))
        if len(values) <= 2 else terms["-sum log d_i!"],
        "-M1/2": -M1 / 2,
        "M2/2M1": M2 / (2 * M1),
        "3/4": 0.75,
        "sum log(1+lambda)": sum_log1p_lambda(d),
    }
    hyp = {"two distinct degrees": len(values) <= 2}
    try:
        t = xi_theorem3(d.n, delta, Delta, ell, slack=slack, xi_max=xi_max)
        hyp.update(t.checks)
        xi, variant = t.value, t.variant
    except HypothesisViolation as exc:
        if not force:
            raise
        hyp.update({k: False for k in exc.failed})
        xi, variant = xi_general(d).value, "general-fallback"
    return _finish(d, terms, xi, method, hyp, force,
                   {"delta": delta, "Delta": Delta, "ell": ell, "case": variant})


def powerlaw_envelope_constant(d, gamma: float, scale: int | None = None) -> float:
    """Smallest ``C`` with ``n_i <= C i^{-gamma} n`` for every degree value ``i``."""
    d = validate_sequence(d)
    n = scale if scale is not None else d.n
    return max(c / (a ** (-gamma) * n) for a, c in d.histogram)


def log_g_all(d, **kw) -> dict[str, LogEstimate]:
    out = {}
    for method in ("general", "m2", "powerlaw", "bivalued"):
        try:
            out[method] = log_g(d, method, force=True, **kw)
        except (HypothesisViolation, ValueError):
            continue
    return out


def report_bounds(d, h=None, slack=1.0):
    return xi_bounds_suite(d, h=h, slack=slack)
