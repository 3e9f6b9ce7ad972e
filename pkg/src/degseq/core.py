"""Degree sequences, pairings, multigraphs and signature matrices.

Vertices are 0-based everywhere in the library.  Vertex ``v`` owns the
consecutive point ids ``offset[v], ..., offset[v] + d_v - 1``.
"""

from __future__ import annotations

import operator
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import EmptySequence, InvalidSignature, NonPositiveDegree, OddTotalDegree


def falling(x: int, k: int) -> int:
    """Falling factorial ``x (x-1) ... (x-k+1)``, counting convention.

    Returns 0 whenever ``x < k`` (including negative ``x``): the number of
    ordered ways to pick ``k`` of ``x`` objects.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if x < k:
        return 0
    out = 1
    for t in range(k):
        out *= x - t
    return out


@dataclass(frozen=True)
class DegreeSequence:
    """Validated degree sequence, stored non-increasing.

    ``order[k]`` is the position in the raw input of the ``k``-th largest degree.
    """

    degrees: tuple[int, ...]
    order: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.order:
            object.__setattr__(self, "order", tuple(range(len(self.degrees))))

    @property
    def n(self) -> int:
        return len(self.degrees)

    @cached_property
    def m1(self) -> int:
        return sum(self.degrees)

    @property
    def even(self) -> bool:
        return self.m1 % 2 == 0

    @property
    def max_degree(self) -> int:
        return self.degrees[0]

    @cached_property
    def histogram(self) -> tuple[tuple[int, int], ...]:
        """Distinct ``(degree, count)`` pairs, degrees descending."""
        counts = Counter(self.degrees)
        return tuple(sorted(counts.items(), reverse=True))

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for d in self.degrees:
            out.append(acc)
            acc += d
        return tuple(out)

    @cached_property
    def point_vertex(self) -> tuple[int, ...]:
        return tuple(v for v, d in enumerate(self.degrees) for _ in range(d))

    def points(self, v: int) -> range:
        return range(self.offsets[v], self.offsets[v] + self.degrees[v])

    def require_even(self) -> None:
        if not self.even:
            raise OddTotalDegree(f"total degree M1={self.m1} is odd")

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self.degrees)

    def __getitem__(self, k):
        return self.degrees[k]


def validate_sequence(raw: Iterable[int]) -> DegreeSequence:
    """Sort ``raw`` non-increasingly, rejecting empty input and degrees below 1.

    Odd totals are accepted here; consumers that need pairings call
    :meth:`DegreeSequence.require_even`.
    """
    if isinstance(raw, DegreeSequence):
        return raw
    values = [operator.index(x) for x in raw]
    if not values:
        raise EmptySequence("degree sequence is empty")
    bad = [x for x in values if x < 1]
    if bad:
        raise NonPositiveDegree(f"degrees must be >= 1, got {bad[0]}")
    order = sorted(range(len(values)), key=lambda k: -values[k])
    return DegreeSequence(tuple(values[k] for k in order), tuple(order))


def read_sequence_file(path: str | Path) -> DegreeSequence:
    """One positive integer per line; blank lines and ``#`` comments ignored."""
    values = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            values.append(int(line))
    return validate_sequence(values)


def write_sequence_file(path: str | Path, d: DegreeSequence | Sequence[int], header: str = "") -> None:
    lines = [f"# {h}" for h in header.splitlines()] if header else []
    lines += [str(x) for x in d]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


class SignatureMatrix:
    """Sparse symmetric signature: loop counts and multiplicities >= 2.

    An absent off-diagonal pair is the star entry (multiplicity 0 or 1).
    Instances are immutable and hashable, so they can key a census.
    """

    __slots__ = ("_loops", "_multis", "_key")

    def __init__(self, loops: Mapping[int, int] | None = None,
                 multis: Mapping[tuple[int, int], int] | None = None):
        lp = {}
        for v, c in (loops or {}).items():
            if c < 0:
                raise InvalidSignature(f"negative loop count at vertex {v}")
            if c:
                lp[int(v)] = int(c)
        ml = {}
        for (u, v), m in (multis or {}).items():
            if u == v:
                raise InvalidSignature("loops belong in the diagonal map")
            if m < 2:
                raise InvalidSignature(f"stored multiplicity {m} < 2 for pair {(u, v)}")
            key = (u, v) if u < v else (v, u)
            ml[key] = int(m)
        self._loops = lp
        self._multis = ml
        self._key = (tuple(sorted(lp.items())), tuple(sorted(ml.items())))

    @property
    def loops(self) -> Mapping[int, int]:
        return dict(self._loops)

    @property
    def multis(self) -> Mapping[tuple[int, int], int]:
        return dict(self._multis)

    def loop(self, v: int) -> int:
        return self._loops.get(v, 0)

    def multi(self, u: int, v: int) -> int:
        """Entry for an off-diagonal pair, 0 standing for the star."""
        if u > v:
            u, v = v, u
        return self._multis.get((u, v), 0)

    def is_simple(self) -> bool:
        return not self._loops and not self._multis

    def without_pair(self, u: int, v: int) -> "SignatureMatrix":
        ml = dict(self._multis)
        ml.pop((min(u, v), max(u, v)), None)
        return SignatureMatrix(self._loops, ml)

    def with_pair(self, u: int, v: int, m: int) -> "SignatureMatrix":
        ml = dict(self._multis)
        key = (min(u, v), max(u, v))
        if m >= 2:
            ml[key] = m
        else:
            ml.pop(key, None)
        return SignatureMatrix(self._loops, ml)

    def with_loop(self, v: int, m: int) -> "SignatureMatrix":
        lp = dict(self._loops)
        lp[v] = m
        return SignatureMatrix(lp, self._multis)

    def check_for(self, d: DegreeSequence, joint: bool = False) -> None:
        """Raise :class:`InvalidSignature` unless every entry fits ``d``.

        Entrywise: ``2 m_ii <= d_i`` and ``m_ij <= min(d_i, d_j)``.  With
        ``joint`` also require the row sums to fit, as for a real pairing.
        """
        n = d.n
        used = [0] * n
        for v, c in self._loops.items():
            if not 0 <= v < n:
                raise InvalidSignature(f"vertex {v} out of range")
            if 2 * c > d[v]:
                raise InvalidSignature(f"{c} loops do not fit degree {d[v]} at vertex {v}")
            used[v] += 2 * c
        for (u, v), m in self._multis.items():
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidSignature(f"pair {(u, v)} out of range")
            if m > min(d[u], d[v]):
                raise InvalidSignature(f"multiplicity {m} exceeds degrees at {(u, v)}")
            used[u] += m
            used[v] += m
        if joint:
            for v in range(n):
                if used[v] > d[v]:
                    raise InvalidSignature(f"signature uses {used[v]} > d_{v}={d[v]} points")

    def __eq__(self, other):
        return isinstance(other, SignatureMatrix) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"SignatureMatrix(loops={self._loops}, multis={self._multis})"

    def to_json(self) -> dict:
        return {
            "loops": {str(v + 1): c for v, c in sorted(self._loops.items())},
            "multis": [[u + 1, v + 1, m] for (u, v), m in sorted(self._multis.items())],
        }


SIMPLE = SignatureMatrix()


@dataclass(frozen=True)
class Multigraph:
    """Edge multiset on ``n`` vertices; keys ``(u, v)`` with ``u <= v``."""

    n: int
    edges: Mapping[tuple[int, int], int]

    def multiplicity(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self.edges.get((u, v), 0)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for (u, v), m in self.edges.items():
            deg[u] += m
            deg[v] += m
        return deg

    def signature(self) -> SignatureMatrix:
        loops = {u: m for (u, v), m in self.edges.items() if u == v}
        multis = {(u, v): m for (u, v), m in self.edges.items() if u != v and m >= 2}
        return SignatureMatrix(loops, multis)


class Pairing:
    """Perfect matching on the points of a degree sequence.

    ``mate[p]`` is the point paired with ``p``.
    """

    __slots__ = ("d", "mate")

    def __init__(self, d: DegreeSequence, mate: Sequence[int]):
        d.require_even()
        mate = tuple(int(x) for x in mate)
        if len(mate) != d.m1:
            raise ValueError(f"mate has {len(mate)} entries, expected M1={d.m1}")
        for p, q in enumerate(mate):
            if q == p or not 0 <= q < d.m1 or mate[q] != p:
                raise ValueError(f"mate is not a fixed-point-free involution at point {p}")
        self.d = d
        self.mate = mate

    @classmethod
    def from_pairs(cls, d: DegreeSequence, pairs: Iterable[tuple[int, int]]) -> "Pairing":
        mate = [-1] * d.m1
        for a, b in pairs:
            if mate[a] != -1 or mate[b] != -1:
                raise ValueError(f"point reused in pair {(a, b)}")
            mate[a], mate[b] = b, a
        if -1 in mate:
            raise ValueError("pairs do not cover every point")
        return cls(d, mate)

    @property
    def bins(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.d.points(v)) for v in range(self.d.n))

    def vertex(self, p: int) -> int:
        return self.d.point_vertex[p]

    def pairs(self) -> list[tuple[int, int]]:
        return [(p, q) for p, q in enumerate(self.mate) if p < q]

    def replace(self, remove: Iterable[tuple[int, int]], add: Iterable[tuple[int, int]]) -> "Pairing":
        mate = list(self.mate)
        for a, b in remove:
            if mate[a] != b:
                raise ValueError(f"{(a, b)} is not a pair")
            mate[a] = mate[b] = -1
        for a, b in add:
            if mate[a] != -1 or mate[b] != -1:
                raise ValueError(f"point reused in new pair {(a, b)}")
            mate[a], mate[b] = b, a
        return Pairing(self.d, mate)

    def __eq__(self, other):
        return isinstance(other, Pairing) and self.d == other.d and self.mate == other.mate

    def __hash__(self):
        return hash(self.mate)

    def __repr__(self):
        return f"Pairing({self.pairs()})"


def to_multigraph(p: Pairing) -> Multigraph:
    pv = p.d.point_vertex
    edges: Counter = Counter()
    for a, b in p.pairs():
        u, v = pv[a], pv[b]
        edges[(u, v) if u <= v else (v, u)] += 1
    return Multigraph(p.d.n, dict(edges))


def signature_of(p: Pairing) -> SignatureMatrix:
    return to_multigraph(p).signature()


def is_simple(p: Pairing) -> bool:
    return signature_of(p).is_simple()
