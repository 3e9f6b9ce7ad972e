"""Multi-edge and loop switchings on pairings, forward and inverse.

Each operation returns the rewired pairing together with the full set of
violated conditions (``"i"``..``"ix"`` for multi-edges, ``"a"``..``"e"`` for
loops).  An inverse switching is good when its literal conditions are clean
*and* the forward switching it induces on the result is good; the label
``"reverse"`` marks failures of the second part.

Point labels follow the figures: for a multi-edge switch the ``g``-th i-j
pair is ``(2g-1, 2g)`` with ``2g-1`` in vertex ``i`` and the ``g``-th
auxiliary pair is ``(2m+2g-1, 2m+2g)``.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .core import DegreeSequence, Pairing, SIMPLE, SignatureMatrix, falling, signature_of, validate_sequence
from .errors import OracleTooLarge, SwitchMismatch
from .oracle import MAX_M1, census_counts_by_pair, iter_pairings, sequences_upto

MULTI_FORWARD = ("i", "ii", "iii", "iv", "v")
MULTI_INVERSE = ("vi", "vii", "viii", "ix")
LOOP_FORWARD = ("a", "b", "c")
LOOP_INVERSE = ("d", "e")


def _mult_table(p: Pairing) -> Counter:
    pv = p.d.point_vertex
    c: Counter = Counter()
    for a, b in p.pairs():
        u, v = pv[a], pv[b]
        c[(u, v) if u <= v else (v, u)] += 1
    return c


def _mult(c: Counter, u: int, v: int) -> int:
    return c.get((u, v) if u <= v else (v, u), 0)


def _check_pairs(p: Pairing, pairs, what: str) -> None:
    seen = set()
    for a, b in pairs:
        if p.mate[a] != b:
            raise SwitchMismatch(f"{what}: ({a}, {b}) is not a pair of the pairing")
        key = frozenset((a, b))
        if key in seen:
            raise SwitchMismatch(f"{what}: pair ({a}, {b}) chosen twice")
        seen.add(key)


@dataclass(frozen=True)
class SwitchResult:
    pairing: Pairing
    violations: frozenset[str]

    @property
    def good(self) -> bool:
        return not self.violations


# --- multi-edge switching ---------------------------------------------------


@dataclass(frozen=True)
class MultiEdgeSwitch:
    """``ij_pairs[g] = (point in i, point in j)``; ``aux[g] = (2m+2g-1, 2m+2g)``."""

    i: int
    j: int
    ij_pairs: tuple[tuple[int, int], ...]
    aux: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.i == self.j:
            raise SwitchMismatch("i and j must differ")
        if len(self.ij_pairs) != len(self.aux) or not self.aux:
            raise SwitchMismatch("need m >= 1 i-j pairs and as many auxiliary pairs")
        pts = [q for pr in self.aux for q in pr]
        if len(set(pts)) != len(pts):
            raise SwitchMismatch("auxiliary pairs x_g must be distinct")
        if set(pts) & {q for pr in self.ij_pairs for q in pr}:
            raise SwitchMismatch("auxiliary pairs must avoid the i-j pairs")

    @property
    def m(self) -> int:
        return len(self.ij_pairs)


@dataclass(frozen=True)
class InverseMultiSpec:
    """``pts_i[g]`` is point ``2g-1`` (in ``i``), ``pts_j[g]`` is point ``2g`` (in ``j``)."""

    i: int
    j: int
    pts_i: tuple[int, ...]
    pts_j: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.pts_i)


def forward_multi(p: Pairing, s: MultiEdgeSwitch) -> SwitchResult:
    d, pv = p.d, p.d.point_vertex
    i, j = s.i, s.j
    _check_pairs(p, s.ij_pairs + s.aux, "forward multi")
    for a, b in s.ij_pairs:
        if pv[a] != i or pv[b] != j:
            raise SwitchMismatch(f"pair ({a}, {b}) does not join vertex {i} to vertex {j}")
    mult = _mult_table(p)
    if _mult(mult, i, j) != s.m:
        raise SwitchMismatch(f"the pairing has {_mult(mult, i, j)} i-j pairs, switch removes {s.m}")

    bad = set()
    ends = []
    for a, b in s.aux:
        u, v = pv[a], pv[b]
        ends.append({u, v})
        in_multi = u != v and _mult(mult, u, v) >= 2
        if in_multi:
            bad.add("i")
        for w in {u, v} - {i, j}:
            mi, mj = _mult(mult, i, w), _mult(mult, j, w)
            if (mi >= 2 or mj >= 2) and not in_multi:
                bad.add("ii")
            if mi == 1 or mj == 1:
                bad.add("iii")
        if {u, v} & {i, j} or u == v:
            bad.add("v")
    for e, f in itertools.combinations(ends, 2):
        if e & f:
            bad.add("iv")
    new = [(pi, a) for (pi, _), (a, _) in zip(s.ij_pairs, s.aux)]
    new += [(pj, b) for (_, pj), (_, b) in zip(s.ij_pairs, s.aux)]
    out = p.replace(list(s.ij_pairs) + list(s.aux), new)
    return SwitchResult(out, frozenset(bad))


def induced_inverse(s: MultiEdgeSwitch) -> InverseMultiSpec:
    return InverseMultiSpec(s.i, s.j, tuple(a for a, _ in s.ij_pairs), tuple(b for _, b in s.ij_pairs))


def induced_forward(p: Pairing, s: InverseMultiSpec) -> MultiEdgeSwitch:
    """The forward switch that would undo ``s`` applied to ``p``."""
    return MultiEdgeSwitch(s.i, s.j, tuple(zip(s.pts_i, s.pts_j)),
                           tuple((p.mate[a], p.mate[b]) for a, b in zip(s.pts_i, s.pts_j)))


def inverse_multi(p: Pairing, s: InverseMultiSpec) -> SwitchResult:
    d, pv, mate = p.d, p.d.point_vertex, p.mate
    i, j = s.i, s.j
    if len(s.pts_i) != len(s.pts_j) or not s.pts_i:
        raise SwitchMismatch("need m >= 1 points in each of i and j")
    if len(set(s.pts_i)) != s.m or len(set(s.pts_j)) != s.m:
        raise SwitchMismatch("picked points must be distinct")
    if any(pv[a] != i for a in s.pts_i) or any(pv[b] != j for b in s.pts_j):
        raise SwitchMismatch("picked points are not in vertices i and j")
    mult = _mult_table(p)
    if _mult(mult, i, j):
        raise SwitchMismatch("inverse switching needs a pairing without i-j pairs")
    picked = [(a, mate[a]) for a in s.pts_i] + [(b, mate[b]) for b in s.pts_j]
    if len({frozenset(x) for x in picked}) != len(picked):
        raise SwitchMismatch("picked pairs are not distinct")

    bad = set()
    for a, x in picked:
        u, v = pv[a], pv[x]
        if u == v or _mult(mult, u, v) >= 2:
            bad.add("vi")
    far_i = [pv[mate[a]] for a in s.pts_i]
    far_j = [pv[mate[b]] for b in s.pts_j]
    for u, v in zip(far_i, far_j):
        if u != v:
            k = _mult(mult, u, v)
            if k >= 2:
                bad.add("vii")
            elif k == 1:
                bad.add("viii")
    if set(far_i) & set(far_j):
        bad.add("ix")
    new = [(a, b) for a, b in zip(s.pts_i, s.pts_j)]
    new += [(mate[a], mate[b]) for a, b in zip(s.pts_i, s.pts_j)]
    out = p.replace(picked, new)
    try:
        if not forward_multi(out, induced_forward(p, s)).good:
            bad.add("reverse")
    except SwitchMismatch:
        bad.add("reverse")
    return SwitchResult(out, frozenset(bad))


# --- loop switching ------------------------------------------------------------


@dataclass(frozen=True)
class LoopSwitch:
    """``loops[g] = (2g-1, 2g)``, ``aux1[g] = (2m+2g-1, 2m+2g)``, ``aux2[g] = (4m+2g-1, 4m+2g)``."""

    i: int
    loops: tuple[tuple[int, int], ...]
    aux1: tuple[tuple[int, int], ...]
    aux2: tuple[tuple[int, int], ...]

    def __post_init__(self):
        m = len(self.loops)
        if m < 1 or len(self.aux1) != m or len(self.aux2) != m:
            raise SwitchMismatch("need m >= 1 loops and m + m auxiliary pairs")
        pts = [q for pr in self.aux1 + self.aux2 for q in pr]
        if len(set(pts)) != len(pts):
            raise SwitchMismatch("auxiliary pairs must be distinct")
        if set(pts) & {q for pr in self.loops for q in pr}:
            raise SwitchMismatch("auxiliary pairs must avoid the loops being removed")

    @property
    def m(self) -> int:
        return len(self.loops)


@dataclass(frozen=True)
class InverseLoopSpec:
    """``pts[2g-2], pts[2g-1]`` are points ``2g-1, 2g`` in ``i``;
    ``aux[g] = (2m+2g, 4m+2g-1)``."""

    i: int
    pts: tuple[int, ...]
    aux: tuple[tuple[int, int], ...]

    @property
    def m(self) -> int:
        return len(self.aux)


def _no_heavy_offdiag(mult: Counter) -> bool:
    return all(k < 2 for (u, v), k in mult.items() if u != v)


def forward_loop(p: Pairing, s: LoopSwitch) -> SwitchResult:
    pv = p.d.point_vertex
    i, m = s.i, s.m
    _check_pairs(p, s.loops + s.aux1 + s.aux2, "forward loop")
    mult = _mult_table(p)
    if not _no_heavy_offdiag(mult):
        raise SwitchMismatch("loop switching applies to pairings without non-loop multiple edges")
    if any(pv[a] != i or pv[b] != i for a, b in s.loops):
        raise SwitchMismatch("selected loops are not at vertex i")
    if _mult(mult, i, i) != m:
        raise SwitchMismatch(f"vertex i carries {_mult(mult, i, i)} loops, switch removes {m}")

    bad = set()
    vs = [pv[q] for pr in s.aux1 + s.aux2 for q in pr]
    if i in vs or len(set(vs)) != len(vs):
        bad.add("a")
    for (a, b), (c, e) in zip(s.aux1, s.aux2):
        for w in (pv[a], pv[e]):
            if w != i and _mult(mult, i, w):
                bad.add("b")
        if pv[b] != pv[c] and _mult(mult, pv[b], pv[c]):
            bad.add("c")
    new = []
    for (l1, l2), (a, b), (c, e) in zip(s.loops, s.aux1, s.aux2):
        new += [(l1, a), (l2, e), (b, c)]
    out = p.replace(list(s.loops) + list(s.aux1) + list(s.aux2), new)
    return SwitchResult(out, frozenset(bad))


def induced_inverse_loop(s: LoopSwitch) -> InverseLoopSpec:
    pts = tuple(q for pr in s.loops for q in pr)
    return InverseLoopSpec(s.i, pts, tuple((b, c) for (_, b), (c, _) in zip(s.aux1, s.aux2)))


def induced_forward_loop(p: Pairing, s: InverseLoopSpec) -> LoopSwitch:
    mate = p.mate
    loops = tuple((s.pts[2 * g], s.pts[2 * g + 1]) for g in range(s.m))
    aux1 = tuple((mate[l1], b) for (l1, _), (b, _) in zip(loops, s.aux))
    aux2 = tuple((c, mate[l2]) for (_, l2), (_, c) in zip(loops, s.aux))
    return LoopSwitch(s.i, loops, aux1, aux2)


def inverse_loop(p: Pairing, s: InverseLoopSpec) -> SwitchResult:
    pv, mate = p.d.point_vertex, p.mate
    i, m = s.i, s.m
    if m < 1 or len(s.pts) != 2 * m:
        raise SwitchMismatch("need 2m points in i and m auxiliary pairs")
    if len(set(s.pts)) != 2 * m or any(pv[q] != i for q in s.pts):
        raise SwitchMismatch("picked points must be distinct points of vertex i")
    mult = _mult_table(p)
    if _mult(mult, i, i):
        raise SwitchMismatch("inverse loop switching needs a pairing without loops at i")
    if not _no_heavy_offdiag(mult):
        raise SwitchMismatch("loop switching applies to pairings without non-loop multiple edges")
    picked = [(q, mate[q]) for q in s.pts]
    _check_pairs(p, tuple(s.aux), "inverse loop")
    used = {q for pr in picked for q in pr}
    if used & {q for pr in s.aux for q in pr}:
        raise SwitchMismatch("auxiliary pairs must avoid the picked pairs")

    bad = set()
    a_s = [mate[s.pts[2 * g]] for g in range(m)]
    e_s = [mate[s.pts[2 * g + 1]] for g in range(m)]
    vs = ([pv[x] for x in a_s] + [pv[b] for b, _ in s.aux]
          + [pv[c] for _, c in s.aux] + [pv[x] for x in e_s])
    if len(set(vs)) != len(vs):
        bad.add("d")
    for a, (b, c), e in zip(a_s, s.aux, e_s):
        if (pv[a] != pv[b] and _mult(mult, pv[a], pv[b])) or (pv[c] != pv[e] and _mult(mult, pv[c], pv[e])):
            bad.add("e")
    new = []
    for g, (b, c) in enumerate(s.aux):
        new += [(s.pts[2 * g], s.pts[2 * g + 1]), (a_s[g], b), (c, e_s[g])]
    out = p.replace(picked + list(s.aux), new)
    try:
        if not forward_loop(out, induced_forward_loop(p, s)).good:
            bad.add("reverse")
    except SwitchMismatch:
        bad.add("reverse")
    return SwitchResult(out, frozenset(bad))


# --- enumeration of switch choices ------------------------------------------


def _oriented_sequences(pairs, k):
    """Ordered choices of ``k`` distinct pairs, each in both orientations."""
    for chosen in itertools.permutations(pairs, k):
        for flips in itertools.product((False, True), repeat=k):
            yield tuple((b, a) if f else (a, b) for (a, b), f in zip(chosen, flips))


def forward_multi_choices(p: Pairing, i: int, j: int):
    """Every forward switch at ``(i, j)``, i-j pairs ordered by their point in ``i``."""
    pv = p.d.point_vertex
    ij = sorted((a, b) if pv[a] == i else (b, a) for a, b in p.pairs()
                if {pv[a], pv[b]} == {i, j})
    if not ij:
        return
    others = [pr for pr in p.pairs() if {pv[pr[0]], pv[pr[1]]} != {i, j}]
    for aux in _oriented_sequences(others, len(ij)):
        yield MultiEdgeSwitch(i, j, tuple(ij), aux)


def inverse_multi_choices(p: Pairing, i: int, j: int, m: int):
    """Every inverse spec with ``pts_i`` ascending (the canonical labelling)."""
    d, mate = p.d, p.mate
    for pi in itertools.combinations(d.points(i), m):
        if any(mate[a] in pi for a in pi):
            continue
        for pj in itertools.permutations(d.points(j), m):
            if any(mate[b] in pj for b in pj):
                continue
            yield InverseMultiSpec(i, j, pi, pj)


def _canonical_point_matchings(points):
    """Perfect matchings of ``points`` as ordered tuples, each pair ascending
    and pairs sorted by first element."""
    if not points:
        yield ()
        return
    first, rest = points[0], points[1:]
    for k, q in enumerate(rest):
        for tail in _canonical_point_matchings(rest[:k] + rest[k + 1:]):
            yield ((first, q),) + tail


def forward_loop_choices(p: Pairing, i: int):
    pv = p.d.point_vertex
    loops = sorted(tuple(sorted(pr)) for pr in p.pairs() if pv[pr[0]] == i and pv[pr[1]] == i)
    if not loops:
        return
    m = len(loops)
    others = [pr for pr in p.pairs() if tuple(sorted(pr)) not in loops]
    for aux in _oriented_sequences(others, 2 * m):
        yield LoopSwitch(i, tuple(loops), aux[:m], aux[m:])


def inverse_loop_choices(p: Pairing, i: int, m: int):
    d, mate = p.d, p.mate
    for chosen in itertools.combinations(d.points(i), 2 * m):
        if any(mate[q] in chosen for q in chosen):
            continue
        used = set(chosen) | {mate[q] for q in chosen}
        others = [pr for pr in p.pairs() if pr[0] not in used and pr[1] not in used]
        for lp in _canonical_point_matchings(list(chosen)):
            pts = tuple(q for pr in lp for q in pr)
            for aux in _oriented_sequences(others, m):
                yield InverseLoopSpec(i, pts, aux)


# --- census ratio -----------------------------------------------------------


@dataclass
class CensusRatio:
    exact: Fraction
    prediction: Fraction
    count_from: int
    count_to: int

    @property
    def relative(self) -> float:
        return float(self.exact / self.prediction) if self.prediction else float("inf")

    def to_json(self) -> dict:
        return {"exact": str(self.exact), "exact_float": float(self.exact),
                "prediction": float(self.prediction), "exact_over_prediction": self.relative,
                "count_from": self.count_from, "count_to": self.count_to}


def leading_ratio(di: int, dj: int, m: int, m1: int) -> Fraction:
    if m == 0:
        return Fraction(1)
    return Fraction(falling(di, m) * falling(dj, m), factorial(m) * m1**m)


def census_ratio(d, i: int, j: int, m_from: int, m_to: int = 0,
                 base: SignatureMatrix = SIMPLE) -> CensusRatio:
    """``|C(M(m_from))| / |C(M(m_to))|`` where ``M(m)`` is ``base`` with the
    ``(i, j)`` entry set to ``m`` (0 and 1 meaning that exact multiplicity)."""
    d = validate_sequence(d)
    if d.m1 > MAX_M1:
        raise OracleTooLarge(f"M1={d.m1} exceeds the enumeration guard {MAX_M1}")
    base = base.without_pair(i, j)
    counts = census_counts_by_pair(d, i, j)
    c_from = counts.get((m_from, base), 0)
    c_to = counts.get((m_to, base), 0)
    if c_to == 0:
        raise ZeroDivisionError(f"no pairings with Y_ij={m_to} and the given remainder")
    pred = leading_ratio(d[i], d[j], m_from, d.m1) / leading_ratio(d[i], d[j], m_to, d.m1)
    return CensusRatio(Fraction(c_from, c_to), pred, c_from, c_to)


def star_split(d, i: int, j: int, base: SignatureMatrix = SIMPLE) -> tuple[int, int, int]:
    """``(|C(M(star))|, |C(M(0))|, |C(M(1))|)`` from the signature census and the
    multiplicity census respectively."""
    from .oracle import enumerate_pairings

    d = validate_sequence(d)
    base = base.without_pair(i, j)
    star = enumerate_pairings(d).census.get(base, 0)
    counts = census_counts_by_pair(d, i, j)
    return star, counts.get((0, base), 0), counts.get((1, base), 0)


# --- exhaustive suite ---------------------------------------------------------


@dataclass
class SuiteReport:
    sequences: int = 0
    pairings: int = 0
    forward_good: int = 0
    inverse_good: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"ok": self.ok, "sequences": self.sequences, "pairings": self.pairings,
                "forward_good": self.forward_good, "inverse_good": self.inverse_good,
                "failures": self.failures[:50]}


def _suite_one(d: DegreeSequence, rep: SuiteReport) -> None:
    pairings = list(iter_pairings(d))
    rep.pairings += len(pairings)
    sigs = [signature_of(p) for p in pairings]
    mults = [_mult_table(p) for p in pairings]
    n = d.n
    fwd = defaultdict(int)
    inv = defaultdict(int)
    for p, sig, mt in zip(pairings, sigs, mults):
        heavy_free = _no_heavy_offdiag(mt)
        for i in range(n):
            for j in range(i + 1, n):
                y = _mult(mt, i, j)
                if y:
                    rest = sig.without_pair(i, j)
                    for s in forward_multi_choices(p, i, j):
                        r = forward_multi(p, s)
                        if not r.good:
                            continue
                        fwd[("multi", i, j, y, rest)] += 1
                        rep.forward_good += 1
                        if signature_of(r.pairing) != rest:
                            rep.failures.append(f"{d.degrees}: multi postcondition at {(i, j)}")
                        back = inverse_multi(r.pairing, induced_inverse(s))
                        if not back.good or back.pairing != p:
                            rep.failures.append(f"{d.degrees}: multi round trip at {(i, j)}")
                else:
                    for m in range(1, min(d[i], d[j]) + 1):
                        for s in inverse_multi_choices(p, i, j, m):
                            try:
                                r = inverse_multi(p, s)
                            except SwitchMismatch:
                                continue
                            if r.good:
                                inv[("multi", i, j, m, sig)] += 1
                                rep.inverse_good += 1
        if not heavy_free:
            continue
        for i in range(n):
            lm = _mult(mt, i, i)
            if lm:
                rest = sig.with_loop(i, 0)
                for s in forward_loop_choices(p, i):
                    r = forward_loop(p, s)
                    if not r.good:
                        continue
                    fwd[("loop", i, lm, rest)] += 1
                    rep.forward_good += 1
                    if signature_of(r.pairing) != rest:
                        rep.failures.append(f"{d.degrees}: loop postcondition at {i}")
                    back = inverse_loop(r.pairing, induced_inverse_loop(s))
                    if not back.good or back.pairing != p:
                        rep.failures.append(f"{d.degrees}: loop round trip at {i}")
            else:
                for m in range(1, d[i] // 2 + 1):
                    for s in inverse_loop_choices(p, i, m):
                        try:
                            r = inverse_loop(p, s)
                        except SwitchMismatch:
                            continue
                        if r.good:
                            inv[("loop", i, m, sig)] += 1
                            rep.inverse_good += 1
    for key in set(fwd) | set(inv):
        if fwd.get(key, 0) != inv.get(key, 0):
            rep.failures.append(f"{d.degrees}: incidence mismatch {key[:-1]}: "
                                f"forward {fwd.get(key, 0)} vs inverse {inv.get(key, 0)}")


def switching_suite(max_m1: int = 10, sequences=None) -> SuiteReport:
    """Round trip, signature postcondition and forward/inverse incidence counts,
    exhaustively over all pairings of every sequence with ``M1 <= max_m1``."""
    rep = SuiteReport()
    seqs = sequences if sequences is not None else sequences_upto(max_m1)
    for raw in seqs:
        d = validate_sequence(raw)
        if d.m1 > max_m1:
            continue
        rep.sequences += 1
        _suite_one(d, rep)
    return rep
