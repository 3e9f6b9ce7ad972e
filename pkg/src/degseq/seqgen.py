"""Degree-sequence families: regular, bi-valued, power-law bounded (plain and
strict) and long-tailed, plus conformance checks with explicit constants."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .core import DegreeSequence, validate_sequence
from .errbounds import theorem4_beta_bound
from .errors import InvalidFamilyParams

KINDS = ("regular", "bivalued", "powerlaw", "strict_powerlaw", "longtail")
PARITY_POLICIES = ("increment", "drop")


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    n: int
    d: int | None = None  # regular
    delta: int | None = None  # bivalued
    Delta: int | None = None
    ell: int | None = None
    gamma: float | None = None  # powerlaw / longtail
    c: float = 1.0
    alpha: float | None = None  # longtail
    beta: float | None = None
    filler: int = 3
    seed: int | None = None
    parity: str = "increment"

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def _floor_pow(n: int, e: float) -> int:
    """``floor(n^e)`` robust to rounding just below an integer."""
    x = n ** e
    k = math.floor(x)
    if math.isclose(x, k + 1, rel_tol=1e-12):
        k += 1
    return k


def check_spec(spec: FamilySpec) -> None:
    bad = []
    if spec.kind not in KINDS:
        raise InvalidFamilyParams(f"unknown family {spec.kind!r}; choose from {KINDS}")
    if spec.parity not in PARITY_POLICIES:
        bad.append(f"parity policy must be one of {PARITY_POLICIES}")
    if spec.n < 1:
        bad.append("n >= 1")
    k = spec.kind
    if k == "regular" and (spec.d is None or not 1 <= spec.d):
        bad.append("regular needs d >= 1")
    if k == "bivalued":
        if None in (spec.delta, spec.Delta, spec.ell):
            bad.append("bivalued needs delta, Delta, ell")
        elif not (1 <= spec.delta <= spec.Delta and 0 <= spec.ell <= spec.n):
            bad.append("need 1 <= delta <= Delta and 0 <= ell <= n")
    if k in ("powerlaw", "strict_powerlaw"):
        if spec.gamma is None or spec.gamma <= 1:
            bad.append("gamma > 1")
        if spec.c <= 0:
            bad.append("c > 0")
    if k == "longtail":
        a, b, g = spec.alpha, spec.beta, spec.gamma
        if None in (a, b, g):
            bad.append("longtail needs alpha, beta, gamma")
        else:
            if not 1 < g < 3 or g == 2:
                bad.append("1 < gamma < 3, gamma != 2")
            if not a > 0.5:
                bad.append("alpha > 1/2")
            if not bad and not 0 < b < theorem4_beta_bound(a, g):
                bad.append("0 < beta < beta_max(alpha, gamma)")
            if spec.filler < 1:
                bad.append("filler >= 1")
    if bad:
        raise InvalidFamilyParams("; ".join(bad))


def powerlaw_counts(n: int, gamma: float, c: float = 1.0, strict: bool = False) -> dict[int, int]:
    """``n_i = floor(c i^-gamma n)`` for ``i = 1..floor(n^(1/gamma))``."""
    top = _floor_pow(n, 1 / gamma)
    out = {}
    for i in range(1, top + 1):
        k = math.floor(c * i ** (-gamma) * n)
        if strict:
            k = max(k, 1)
        if k:
            out[i] = k
    return out


def longtail_bands(n: int, alpha: float, beta: float, gamma: float) -> dict[int, int]:
    """Band ``i`` gets ``floor(n^beta i^-gamma)`` coordinates while that is >= 1."""
    out = {}
    i = 1
    while True:
        k = math.floor(n**beta * i ** (-gamma))
        if k < 1:
            break
        out[i] = k
        i += 1
    return out


def _fix_parity(deg: list[int], policy: str) -> list[int]:
    if sum(deg) % 2 == 0:
        return deg
    deg = sorted(deg, reverse=True)
    if policy == "increment":
        deg[-1] += 1
    else:
        odd = [k for k, x in enumerate(deg) if x % 2]
        deg.pop(odd[-1])
    return deg


def generate(spec: FamilySpec) -> DegreeSequence:
    check_spec(spec)
    k, n = spec.kind, spec.n
    if k == "regular":
        deg = [spec.d] * n
    elif k == "bivalued":
        deg = [spec.Delta] * spec.ell + [spec.delta] * (n - spec.ell)
    elif k in ("powerlaw", "strict_powerlaw"):
        counts = powerlaw_counts(n, spec.gamma, spec.c, strict=k == "strict_powerlaw")
        deg = [i for i, c in sorted(counts.items(), reverse=True) for _ in range(c)]
    else:
        unit = n**spec.alpha
        bands = longtail_bands(n, spec.alpha, spec.beta, spec.gamma)
        heavy = [math.ceil(i * unit) for i, c in sorted(bands.items(), reverse=True) for _ in range(c)]
        if len(heavy) > n:
            raise InvalidFamilyParams(f"{len(heavy)} heavy coordinates exceed n={n}")
        deg = heavy + [spec.filler] * (n - len(heavy))
    if not deg:
        raise InvalidFamilyParams("family produced an empty sequence")
    return validate_sequence(_fix_parity(deg, spec.parity))


@dataclass
class Conformance:
    conforms: bool
    constant: float
    checks: dict[str, bool] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"conforms": self.conforms, "constant": self.constant,
                "checks": self.checks, "notes": self.notes}


def validate_family(d, spec: FamilySpec) -> Conformance:
    """Check ``d`` against the literal counting conditions of ``spec``.

    ``constant`` is the smallest ``C`` that makes the envelope hold; a parity
    fix may move one vertex, which is allowed as one extra unit.
    """
    d = validate_sequence(d)
    hist = dict(d.histogram)
    checks: dict[str, bool] = {"M1 even": d.even}
    notes = []
    k, n = spec.kind, spec.n
    C = 1.0
    if k == "regular":
        off = sum(c for a, c in hist.items() if a != spec.d)
        checks["all degrees equal d (one parity fix allowed)"] = off <= 1 and d.n == n
    elif k == "bivalued":
        vals = set(hist)
        extra = vals - {spec.delta, spec.Delta}
        checks["values in {delta, Delta} (one parity fix allowed)"] = (
            len(extra) == 0 or (len(extra) == 1 and sum(hist[x] for x in extra) == 1))
        checks["ell vertices of degree Delta"] = hist.get(spec.Delta, 0) in (spec.ell, spec.ell - 1) \
            if spec.Delta != spec.delta else True
    elif k in ("powerlaw", "strict_powerlaw"):
        top = _floor_pow(n, 1 / spec.gamma)
        checks["Delta <= floor(n^(1/gamma))"] = d.max_degree <= top + 1
        C = max((c - (1 if a in (1, 2) else 0)) / (a ** (-spec.gamma) * n) for a, c in hist.items())
        checks["n_i <= c i^-gamma n"] = C <= spec.c * (1 + 1e-12)
        if k == "strict_powerlaw":
            checks["n_i >= 1 for i <= Delta"] = all(hist.get(i, 0) >= 1 for i in range(1, top + 1))
        notes.append(f"envelope constant C = {C:.6g} against n = {n}")
    else:
        unit = n**spec.alpha
        heavy = [x for x in d.degrees if x >= unit]
        light = [x for x in d.degrees if x < unit]
        bound = max(light, default=0)
        checks["each coordinate bounded or >= n^alpha"] = bound <= max(spec.filler + 1, 1)
        bands: dict[int, int] = {}
        for x in heavy:
            i = math.floor(x / unit)
            bands[i] = bands.get(i, 0) + 1
        C = max((c / (n**spec.beta * i ** (-spec.gamma)) for i, c in bands.items()), default=0.0)
        checks["band counts <= C n^beta i^-gamma"] = C <= 1.0 + 1e-12
        notes.append(f"band constant C = {C:.6g}; light degrees bounded by {bound}")
    return Conformance(all(checks.values()), C, checks, notes)
