"""Error functionals: the master xi, its simplified upper bounds, and the
closed-form xi of each specialised theorem.

Asymptotic side conditions such as ``Delta = O(sqrt(M1))`` are tested as the
literal inequality scaled by a user ``slack`` factor (default 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .core import validate_sequence
from .errors import HypothesisViolation
from .moments import moments, split, u_functionals


@dataclass
class XiTerms:
    value: float
    terms: dict[str, float]
    exact: Fraction | None = None

    def to_json(self) -> dict:
        return {"value": self.value, "terms": self.terms}


def _pack(terms: dict, exact: bool) -> XiTerms:
    total = sum(terms.values()) if exact else math.fsum(terms.values())
    return XiTerms(float(total), {k: float(v) for k, v in terms.items()},
                   total if exact else None)


def _num(exact: bool):
    return Fraction if exact else float


def xi_general(d, exact: bool | None = None) -> XiTerms:
    """The master error functional built from ``U_1..U_5`` and ``M_1..M_3``."""
    d = validate_sequence(d)
    if exact is None:
        exact = d.n <= 10_000
    U = u_functionals(d, exact=exact)
    num = _num(exact)
    mp = moments(d, 3)
    M1, M2, M3 = (num(x) for x in mp.M)
    terms = {
        "U5": U.U5,
        "(U1+U2^2+U3)/M1": (U.U1 + U.U2**2 + U.U3) / M1,
        "U4*M2/M1^2": U.U4 * M2 / M1**2,
        "U2*M2^2/M1^3": U.U2 * M2**2 / M1**3,
        "M2/M1^2": M2 / M1**2,
        "M3*M2/M1^3": M3 * M2 / M1**3,
        "M2^3/M1^4": M2**3 / M1**4,
    }
    return _pack(terms, exact)


def default_split_index(d) -> int:
    """Smallest ``h`` with ``d_{h+1} <= sqrt(M1)``: the count of degrees above ``sqrt(M1)``."""
    d = validate_sequence(d)
    return sum(1 for x in d.degrees if x * x > d.m1)


@dataclass
class XiReport:
    xi_general: XiTerms
    xi_lemma_a: XiTerms
    xi_lemma_b: XiTerms
    xi_cor_star_a: XiTerms
    xi_cor_star_b: XiTerms
    xi_theta: XiTerms
    xi_split: XiTerms
    xi_split_large: XiTerms
    h: int
    preconditions: dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {k: getattr(self, k).to_json() for k in (
            "xi_general", "xi_lemma_a", "xi_lemma_b", "xi_cor_star_a", "xi_cor_star_b",
            "xi_theta", "xi_split", "xi_split_large")}
        out["h"] = self.h
        out["preconditions"] = dict(self.preconditions)
        return out


def lemma_bound_terms(M1, M2, M3, M4, drop_m4: bool = False) -> dict:
    terms = {
        "(M2+M3)/M1^2": (M2 + M3) / M1**2,
        "(M2^2*M3+M2^3)/M1^4": (M2**2 * M3 + M2**3) / M1**4,
        "M2^4/M1^5": M2**4 / M1**5,
    }
    if not drop_m4:
        terms["M2*M3*M4/M1^5"] = M2 * M3 * M4 / M1**5
    return terms


def split_bound_terms(M, H, L) -> dict:
    """Upper bound with the degrees split at ``h``: ``M``, ``H``, ``L`` are 1-indexed tuples."""
    M1, M2, M3 = M[1], M[2], M[3]
    H1, H2, H4 = H[1], H[2], H[4]
    L2, L3, L4 = L[2], L[3], L[4]
    return {
        "H1/M1": H1 / M1,
        "(H1^3+M2+L3)/M1^2": (H1**3 + M2 + L3) / M1**2,
        "(H1*H2*M2+M2*M3)/M1^3": (H1 * H2 * M2 + M2 * M3) / M1**3,
        "(L2*M2^2+L2*M2*M3)/M1^4": (L2 * M2**2 + L2 * M2 * M3) / M1**4,
        "(M2^3*L2+M2*M3*L4+L2*L3*H4)/M1^5": (M2**3 * L2 + M2 * M3 * L4 + L2 * L3 * H4) / M1**5,
    }


def split_large_terms(M, H, L, drop_m2m3: bool = False) -> dict:
    M1, M2, M3 = M[1], M[2], M[3]
    H1, H2, H4 = H[1], H[2], H[4]
    L2, L3 = L[2], L[3]
    terms = {"H1*H2^2/M1^3": H1 * H2**2 / M1**3}
    if not drop_m2m3:
        terms["M2*M3/M1^3"] = M2 * M3 / M1**3
    terms["L2*M2*M3/M1^4"] = L2 * M2 * M3 / M1**4
    terms["L2*L3*H4/M1^5"] = L2 * L3 * H4 / M1**5
    return terms


def xi_bounds_suite(d, h: int | None = None, slack: float = 1.0,
                    exact: bool | None = None) -> XiReport:
    d = validate_sequence(d)
    if exact is None:
        exact = d.n <= 10_000
    num = _num(exact)
    if h is None:
        h = default_split_index(d)
    mp = moments(d, 4)
    M = (None,) + tuple(num(x) for x in mp.M)
    Hs, Ls = split(d, h, 4)
    H = (None,) + tuple(num(x) for x in Hs)
    L = (None,) + tuple(num(x) for x in Ls)
    M1, M2, M3, M4 = M[1], M[2], M[3], M[4]
    Ms2, Ms3 = M2 + M1, M3 + M1
    sqrt_m1 = math.sqrt(mp.m1)
    delta = d.max_degree

    pre = {
        "Delta<=sqrt(M1)": delta <= slack * sqrt_m1,
        "M1<=M2": float(M1) <= slack * float(M2),
        "M1<=M3": float(M1) <= slack * float(M3),
        "d_h>=sqrt(M1)": h >= 1 and slack * d[h - 1] >= sqrt_m1,
        "d_{h+1}<=sqrt(M1)": h >= d.n or d[h] <= slack * sqrt_m1,
        "L2>=M1": float(L[2]) * slack >= float(M1),
    }
    pre["cor_theta"] = pre["Delta<=sqrt(M1)"] and pre["M1<=M2"] and pre["M1<=M3"]
    pre["split_large"] = pre["d_h>=sqrt(M1)"] and pre["d_{h+1}<=sqrt(M1)"]

    return XiReport(
        xi_general=xi_general(d, exact=exact),
        xi_lemma_a=_pack(lemma_bound_terms(M1, M2, M3, M4), exact),
        xi_lemma_b=_pack(lemma_bound_terms(M1, M2, M3, M4, drop_m4=True), exact),
        xi_cor_star_a=_pack({"M3*(M2*)^2/M1^4": Ms3 * Ms2**2 / M1**4,
                             "M4*M3*M2/M1^5": M4 * M3 * M2 / M1**5}, exact),
        xi_cor_star_b=_pack({"M3*(M2*)^2/M1^4": Ms3 * Ms2**2 / M1**4}, exact),
        xi_theta=_pack({"M3*M2^2/M1^4": M3 * M2**2 / M1**4}, exact),
        xi_split=_pack(split_bound_terms(M, H, L), exact),
        xi_split_large=_pack(split_large_terms(M, H, L, drop_m2m3=pre["L2>=M1"]), exact),
        h=h,
        preconditions=pre,
    )


# --- closed-form xi of the specialised theorems ---------------------------


@dataclass
class TheoremXi:
    value: float
    hypotheses_ok: bool
    checks: dict[str, bool]
    variant: str = ""

    def to_json(self) -> dict:
        return {"value": self.value, "hypotheses_ok": self.hypotheses_ok,
                "checks": self.checks, "variant": self.variant}


def xi_theorem1(d, xi_max: float = 0.25) -> TheoremXi:
    """``M2^4/M1^{9/2} + M2^{3/2}/M1^2 + 1/M1``; ``M2 = o(M1^{9/8})`` is proxied by ``xi <= xi_max``."""
    d = validate_sequence(d)
    mp = moments(d, 2)
    M1, M2 = float(mp.M[0]), float(mp.M[1])
    xi = M2**4 / M1**4.5 + M2**1.5 / M1**2 + 1.0 / M1
    checks = {"xi<=xi_max": xi <= xi_max}
    return TheoremXi(xi, all(checks.values()), checks)


def xi_theorem3(n: int, delta: int, Delta: int, ell: int, case: str | None = None,
                slack: float = 1.0, xi_max: float = 0.25) -> TheoremXi:
    """Bi-valued sequences: ``ell`` vertices of degree ``Delta``, the rest ``delta``.

    ``case`` is ``"a"`` or ``"b"``; when omitted, (a) is used if its size
    condition ``Delta <= sqrt(delta n + Delta ell)`` holds, else (b).
    """
    if not 3 <= delta <= Delta:
        raise HypothesisViolation(f"need 3 <= delta <= Delta, got delta={delta}, Delta={Delta}",
                                  ["3<=delta<=Delta"])
    if not 0 <= ell <= n:
        raise HypothesisViolation(f"need 0 <= ell <= n, got ell={ell}", ["0<=ell<=n"])
    n_, dl, D, l = float(n), float(delta), float(Delta), float(ell)
    cond_a = D <= slack * math.sqrt(dl * n_ + D * l)
    cond_b = slack * D >= math.sqrt(dl * n_)
    if case is None:
        case = "a" if cond_a else "b"
    if case == "a":
        xi = (D**7 * l**3 + D**3 * dl**4 * n_**2 * l + dl**7 * n_**3) / (dl**4 * n_**4 + D**4 * l**4)
        checks = {"Delta<=sqrt(delta*n+Delta*ell)": cond_a}
    elif case == "b":
        xi = (D**5 * l**3 / (dl**3 * n_**3) + D**5 * l**2 / (dl**2 * n_**3)
              + dl**3 / n_ + D**3 * l / n_**2)
        checks = {"Delta>=sqrt(delta*n)": cond_b}
    else:
        raise ValueError("case must be 'a' or 'b'")
    checks["xi<=xi_max"] = xi <= xi_max
    return TheoremXi(xi, all(checks.values()), checks, variant=case)


def theorem4_beta_bound(alpha: float, gamma: float) -> float:
    if gamma > 2:
        return (3 - 5 * alpha) / (1 + 6 / gamma)
    return (3 - 5 * alpha) / (8 / gamma)


def check_theorem4_params(alpha: float, beta: float, gamma: float) -> None:
    failed = []
    if not 1 < gamma < 3:
        failed.append("1<gamma<3")
    if gamma == 2:
        failed.append("gamma!=2")
    if not alpha > 0.5:
        failed.append("alpha>1/2")
    if not failed and not 0 < beta < theorem4_beta_bound(alpha, gamma):
        failed.append("0<beta<beta_max")
    if failed:
        raise HypothesisViolation(
            f"long-tailed parameters (alpha={alpha}, beta={beta}, gamma={gamma}) violate "
            + ", ".join(failed), failed)


def xi_theorem4(n: int, alpha: float, beta: float, gamma: float,
                xi_max: float = 0.25) -> TheoremXi:
    check_theorem4_params(alpha, beta, gamma)
    if gamma > 2:
        xi = float(n) ** (5 * alpha + beta + 6 * beta / gamma - 3)
    else:
        xi = float(n) ** (5 * alpha + 8 * beta / gamma - 3)
    checks = {"xi<=xi_max": xi <= xi_max}
    return TheoremXi(xi, all(checks.values()), checks, variant="gamma>2" if gamma > 2 else "gamma<2")
