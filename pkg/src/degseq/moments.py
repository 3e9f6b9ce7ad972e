"""Scalar functionals of a degree sequence.

Falling-factorial moments ``M_k = sum_i [d_i]_k``, head/tail splits, ``tau``,
``lambda_ij`` and the min-truncated functionals ``U_1 .. U_7``.

The ``U_k`` are evaluated on the distinct-degree histogram.  Every summand is
a ratio with denominator a power of ``M_1``, so the exact path accumulates
integer numerators over a common denominator and returns ``Fraction``; the
float path does the same arithmetic in float64 with ``math.fsum``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .core import DegreeSequence, falling, validate_sequence

EXACT_MAX_N = 10_000
KMAX_LIMIT = 8


@dataclass(frozen=True)
class MomentProfile:
    n: int
    M: tuple[int, ...]  # M[k-1] = M_k
    histogram: tuple[tuple[int, int], ...]
    delta: int
    tau: int
    seq: DegreeSequence = field(repr=False, compare=False)

    def m(self, k: int) -> int:
        return self.M[k - 1]

    @property
    def m1(self) -> int:
        return self.M[0]

    def u(self, exact: bool | None = None, strict: bool = False) -> "UValues":
        return u_functionals(self.seq, exact=exact, strict=strict)

    def to_json(self) -> dict:
        return {"n": self.n, "M": list(self.M), "Delta": self.delta, "tau": self.tau}


def moments(d, kmax: int = 6) -> MomentProfile:
    d = validate_sequence(d)
    if not 1 <= kmax <= KMAX_LIMIT:
        raise ValueError(f"kmax must be in 1..{KMAX_LIMIT}")
    M = tuple(sum(c * falling(a, k) for a, c in d.histogram) for k in range(1, kmax + 1))
    return MomentProfile(d.n, M, d.histogram, d.max_degree, tau(d), d)


def tau(d) -> int:
    """Sum of the ``Delta`` largest degrees (all of them when ``Delta > n``)."""
    d = validate_sequence(d)
    return sum(d.degrees[: d.max_degree])


def split(d, h: int, kmax: int = 4) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Head moments ``H_k`` over the ``h`` largest degrees and tails ``L_k = M_k - H_k``."""
    d = validate_sequence(d)
    if not 0 <= h <= d.n:
        raise ValueError(f"split index h={h} outside 0..{d.n}")
    H = tuple(sum(falling(x, k) for x in d.degrees[:h]) for k in range(1, kmax + 1))
    L = tuple(sum(falling(x, k) for x in d.degrees[h:]) for k in range(1, kmax + 1))
    return H, L


def split_table(d, kmax: int = 4) -> list[list[int]]:
    """Prefix sums: ``table[k-1][h] = H_k`` at split ``h`` for all ``0 <= h <= n``."""
    d = validate_sequence(d)
    table = []
    for k in range(1, kmax + 1):
        row = [0]
        for x in d.degrees:
            row.append(row[-1] + falling(x, k))
        table.append(row)
    return table


def lambda_ij(d, i: int, j: int) -> Fraction:
    d = validate_sequence(d)
    if i == j:
        raise ValueError("lambda is defined for distinct vertices")
    return Fraction(d[i] * d[j], d.m1)


class UValues(NamedTuple):
    U1: object
    U2: object
    U3: object
    U4: object
    U5: object
    U6: object
    U7: object

    def as_float(self) -> list[float]:
        return [float(x) for x in self]


def _total(arr, exact: bool):
    flat = np.asarray(arr).ravel()
    if exact:
        return sum(flat.tolist())
    return math.fsum(flat.tolist())


def u_functionals(d, exact: bool | None = None, strict: bool = False) -> UValues:
    """Evaluate ``U_1 .. U_7``.

    ``exact=None`` chooses exact rationals for ``n <= 10^4`` and doubles above.
    ``strict`` drops the ``w in {i, j}`` terms from the triple sums of ``U_3``
    and ``U_5`` (the default keeps the literal range ``w <= n``).

    Falling factorials of negative arguments count as 0 and the factor
    ``d_i - 2`` inside ``U_5``/``U_7`` is clamped at 0, so every summand is
    nonnegative.
    """
    d = validate_sequence(d)
    if d.m1 <= 0:
        raise ZeroDivisionError("M1 = 0")
    if exact is None:
        exact = d.n <= EXACT_MAX_N
    dtype = object if exact else np.float64
    vals = np.array([a for a, _ in d.histogram], dtype=dtype)
    cnts = np.array([c for _, c in d.histogram], dtype=dtype)
    M = d.m1 if exact else float(d.m1)
    M2 = M * M

    ivals = np.array([a for a, _ in d.histogram])
    ff2 = vals * (vals - 1)
    ff3 = ff2 * (vals - 2)
    ffm2 = np.where(ivals >= 4, (vals - 2) * (vals - 3), 0).astype(dtype)  # [a-2]_2
    am2 = np.where(ivals >= 2, vals - 2, 0).astype(dtype)  # (a-2) clamped

    W = np.outer(cnts, cnts) - np.diag(cnts)  # ordered pairs i != j by degree value

    def frac(num, p):
        return Fraction(num, d.m1 ** p) if exact else num / float(d.m1) ** p

    # U1 over M
    u1 = _total(cnts * (vals - 2) * np.minimum(ff2, M), exact)
    # U2 over M^2, unordered pairs = half the ordered sum of a symmetric kernel
    f2 = np.minimum(np.outer(ff2, ff2), np.outer(vals, vals) * M)
    u2 = _total(W * f2, exact)
    u2 = u2 // 2 if exact else u2 / 2
    # U3 over M^4
    g3 = np.minimum(np.outer(ffm2, ff2), M2)  # g3[a, w]
    G3 = g3 @ (cnts * (vals - 2)) if exact else g3.dot(cnts * (vals - 2))
    inner3 = np.broadcast_to(G3[:, None], W.shape)
    if strict:
        inner3 = inner3 - (np.diag(g3) * (vals - 2))[:, None] - g3 * (vals - 2)[None, :]
    u3 = _total(W * f2 * inner3, exact)
    # U4 over M^2
    f4 = np.minimum(np.outer(ff3, ff2), np.outer(ff2, vals) * M)
    u4 = _total(W * f4, exact)
    # U5 over M^4
    f5 = np.minimum(np.outer(vals, ff2), np.outer(np.ones_like(vals), vals) * M)
    g5 = np.minimum(np.outer(ffm2, ff2), np.outer(am2, vals) * M)
    G5 = g5 @ cnts if exact else g5.dot(cnts)
    inner5 = np.broadcast_to(G5[:, None], W.shape)
    if strict:
        inner5 = inner5 - np.diag(g5)[:, None] - g5
    u5 = _total(W * f5 * inner5, exact)
    # U6 over M^2
    f6 = np.minimum(np.outer(ff3, ff3), np.outer(vals, vals) * M2)
    u6 = _total(W * f6, exact)
    # U7 over M^3
    f7 = ff2[:, None] * np.minimum(np.outer(am2, ff2), np.outer(np.ones_like(vals), vals) * M)
    u7 = _total(W * f7, exact)

    return UValues(frac(u1, 1), frac(u2, 2), frac(u3, 4), frac(u4, 2),
                   frac(u5, 4), frac(u6, 2), frac(u7, 3))


def u_functionals_naive(d, strict: bool = False) -> UValues:
    """Literal O(n^3) evaluation in exact rationals; the cross-check reference."""
    d = validate_sequence(d)
    x = d.degrees
    n = d.n
    M = Fraction(d.m1)

    def ff(a, k):
        return falling(a, k)

    U = [Fraction(0)] * 7
    for v in range(n):
        U[0] += (x[v] - 2) * min(Fraction(ff(x[v], 2)) / M, Fraction(1))
    for u in range(n):
        for v in range(u + 1, n):
            U[1] += min(ff(x[u], 2) * ff(x[v], 2) / M**2, x[u] * x[v] / M)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            a, b = x[i], x[j]
            first2 = min(ff(a, 2) * ff(b, 2) / M**2, a * b / M)
            first5 = min(a * ff(b, 2) / M**2, b / M)
            for w in range(n):
                if strict and w in (i, j):
                    continue
                c = x[w]
                U[2] += first2 * min(ff(a - 2, 2) * ff(c, 2) / M**2, Fraction(1)) * (c - 2)
                U[4] += first5 * min(ff(a - 2, 2) * ff(c, 2) / M**2, max(a - 2, 0) * c / M)
            U[3] += min(ff(a, 3) * ff(b, 2) / M**2, ff(a, 2) * b / M)
            U[5] += min(ff(a, 3) * ff(b, 3) / M**2, Fraction(a * b))
            U[6] += ff(a, 2) / M * min(max(a - 2, 0) * ff(b, 2) / M**2, b / M)
    return UValues(*U)
