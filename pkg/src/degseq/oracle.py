"""Exhaustive ground truth for small degree sequences.

Two independent counts of simple graphs are provided: one through the full
census of perfect matchings, one by backtracking over adjacency matrices.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from .core import DegreeSequence, Multigraph, Pairing, SIMPLE, SignatureMatrix, falling, validate_sequence
from .errors import OracleTooLarge

MAX_M1 = 16


def _guard(d: DegreeSequence) -> None:
    d.require_even()
    if d.m1 > MAX_M1:
        raise OracleTooLarge(f"M1={d.m1} exceeds the enumeration guard {MAX_M1}")


@lru_cache(maxsize=None)
def matching_table(m1: int) -> np.ndarray:
    """All perfect matchings of ``m1`` points as an array of shape
    ``((m1-1)!!, m1/2, 2)``, built by always matching the smallest free point."""
    if m1 % 2:
        raise ValueError("odd number of points")
    if m1 > MAX_M1:
        raise OracleTooLarge(f"M1={m1} exceeds the enumeration guard {MAX_M1}")
    if m1 == 0:
        return np.zeros((1, 0, 2), dtype=np.int8)
    sub = matching_table(m1 - 2)
    rows = []
    for k in range(1, m1):
        # relabel the m1-2 remaining points {1..m1-1} \ {k}
        rest = np.array([p for p in range(1, m1) if p != k], dtype=np.int8)
        head = np.broadcast_to(np.array([[0, k]], dtype=np.int8), (sub.shape[0], 1, 2))
        rows.append(np.concatenate([head, rest[sub]], axis=1) if sub.shape[1] else head.copy())
    out = np.concatenate(rows, axis=0)
    out.setflags(write=False)
    return out


def iter_pairings(d) -> Iterator[Pairing]:
    d = validate_sequence(d)
    _guard(d)
    for row in matching_table(d.m1):
        yield Pairing.from_pairs(d, row.tolist())


def multigraph_census(d) -> dict[tuple[tuple[int, int], ...], int]:
    """Map from sorted edge list (with repetition) to the number of pairings giving it."""
    d = validate_sequence(d)
    _guard(d)
    tab = matching_table(d.m1)
    if d.m1 == 0:
        return {(): 1}
    pv = np.asarray(d.point_vertex, dtype=np.int64)
    a, b = pv[tab[..., 0]], pv[tab[..., 1]]
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    codes = np.sort(lo * d.n + hi, axis=1)
    uniq, counts = np.unique(codes, axis=0, return_counts=True)
    n = d.n
    return {tuple((int(c) // n, int(c) % n) for c in row): int(k) for row, k in zip(uniq, counts)}


def _as_multigraph(n: int, edges: tuple[tuple[int, int], ...]) -> Multigraph:
    return Multigraph(n, dict(Counter(edges)))


@dataclass
class OracleReport:
    d: DegreeSequence
    phi: int
    census: dict[SignatureMatrix, int]
    expectations: dict[str, Fraction] = field(default_factory=dict)

    @property
    def m1(self) -> int:
        return self.d.m1

    @property
    def simple_pairings(self) -> int:
        return self.census.get(SIMPLE, 0)

    @property
    def prod_factorials(self) -> int:
        return math.prod(math.factorial(x) for x in self.d.degrees)

    @property
    def g(self) -> int:
        q, r = divmod(self.simple_pairings, self.prod_factorials)
        assert r == 0, "simple pairings not divisible by prod d_i!"
        return q

    @property
    def p_simple(self) -> Fraction:
        return Fraction(self.simple_pairings, self.phi)

    def to_json(self, with_census: bool = False) -> dict:
        out = {
            "M1": self.m1,
            "phi": self.phi,
            "g": self.g,
            "p_simple": str(self.p_simple),
            "simple_pairings": self.simple_pairings,
            "expectations": {k: str(v) for k, v in self.expectations.items()},
        }
        if with_census:
            out["census"] = [{"signature": s.to_json(), "count": c}
                             for s, c in sorted(self.census.items(), key=lambda kv: -kv[1])]
        return out


Statistic = Callable[[Multigraph, DegreeSequence], int | Fraction]


def enumerate_pairings(d, visitor: Callable[[Pairing], None] | None = None,
                       statistics: dict[str, Statistic] | None = None) -> OracleReport:
    """Exhaustive census of signatures, exact expectations of multigraph
    statistics, and an optional per-pairing visitor."""
    d = validate_sequence(d)
    _guard(d)
    mg = multigraph_census(d)
    census: Counter = Counter()
    phi = 0
    graphs = []
    for edges, k in mg.items():
        g = _as_multigraph(d.n, edges)
        census[g.signature()] += k
        phi += k
        graphs.append((g, k))
    exp = {}
    for name, stat in (statistics or {}).items():
        exp[name] = Fraction(sum(k * stat(g, d) for g, k in graphs), phi)
    if visitor is not None:
        for p in iter_pairings(d):
            visitor(p)
    return OracleReport(d, phi, dict(census), exp)


def exact_expectation(d, statistic: Statistic) -> Fraction:
    return enumerate_pairings(d, statistics={"s": statistic}).expectations["s"]


# --- common statistics ------------------------------------------------------


def stat_Y(u: int, v: int) -> Statistic:
    return lambda g, d: g.multiplicity(u, v)


def stat_Y2(u: int, v: int) -> Statistic:
    return lambda g, d: falling(g.multiplicity(u, v), 2)


def stat_Z(g: Multigraph, d) -> int:
    return sum(m for (u, v), m in g.edges.items() if u != v and m >= 2)


def stat_Z2(g: Multigraph, d) -> int:
    return sum(m * m for (u, v), m in g.edges.items() if u != v and m >= 2)


def stat_Z0(g: Multigraph, d) -> int:
    return sum(m for (u, v), m in g.edges.items() if u == v)


NAMED_STATS: dict[str, Statistic] = {"Z": stat_Z, "Z2": stat_Z2, "Z0": stat_Z0}


def parse_statistic(token: str) -> Statistic:
    """``Z``, ``Z2``, ``Z0``, ``Y:u:v`` or ``Y2:u:v`` (1-based vertices)."""
    if token in NAMED_STATS:
        return NAMED_STATS[token]
    parts = token.split(":")
    if len(parts) == 3 and parts[0] in ("Y", "Y2"):
        u, v = int(parts[1]) - 1, int(parts[2]) - 1
        return stat_Y(u, v) if parts[0] == "Y" else stat_Y2(u, v)
    raise ValueError(f"unknown statistic {token!r}")


# --- second, independent oracle ---------------------------------------------


def count_simple_graphs(d) -> int:
    """Labelled simple graphs with degree sequence ``d`` by row-wise backtracking.

    Row ``i`` chooses its neighbours among ``j > i`` so that the residual
    degree of ``i`` hits zero; columns are checked against remaining capacity.
    """
    d = validate_sequence(d)
    n = d.n
    if d.m1 % 2:
        return 0
    res = list(d.degrees)

    def rows(i: int) -> int:
        if i == n:
            return 1
        need = res[i]
        cand = [j for j in range(i + 1, n) if res[j] > 0]
        if need > len(cand):
            return 0
        total = 0

        def pick(start: int, left: int, chosen: list[int]) -> None:
            nonlocal total
            if left == 0:
                for j in chosen:
                    res[j] -= 1
                saved = res[i]
                res[i] = 0
                total += rows(i + 1)
                res[i] = saved
                for j in chosen:
                    res[j] += 1
                return
            for k in range(start, len(cand) - left + 1):
                chosen.append(cand[k])
                pick(k + 1, left - 1, chosen)
                chosen.pop()

        pick(0, need, [])
        return total

    return rows(0)


def sequences_upto(max_m1: int, max_n: int | None = None, even_only: bool = True) -> Iterator[tuple[int, ...]]:
    """Non-increasing positive sequences with total at most ``max_m1``."""

    def parts(total: int, cap: int, slots: int | None) -> Iterator[tuple[int, ...]]:
        if total == 0:
            yield ()
            return
        if slots == 0:
            return
        for first in range(min(total, cap), 0, -1):
            for rest in parts(total - first, first, None if slots is None else slots - 1):
                yield (first,) + rest

    for total in range(2 if even_only else 1, max_m1 + 1, 2 if even_only else 1):
        yield from parts(total, total, max_n)


def census_counts_by_pair(d, i: int, j: int) -> dict[tuple[int, SignatureMatrix], int]:
    """``(Y_ij, signature without the ij entry) -> count`` over all pairings."""
    d = validate_sequence(d)
    out: Counter = Counter()
    for edges, k in multigraph_census(d).items():
        g = _as_multigraph(d.n, edges)
        out[(g.multiplicity(i, j), g.signature().without_pair(i, j))] += k
    return dict(out)
