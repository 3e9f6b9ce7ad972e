"""Uniform pairings, Monte Carlo simplicity estimates, signature statistics and
the product-space signature sampler.

Reproducibility contract: sample ``k`` of a Monte Carlo run belongs to block
``k // BLOCK`` and every block draws from its own substream
``SeedSequence(seed, spawn_key=(block,))``.  The estimate therefore depends
only on ``(seed, samples)``, never on the thread count.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import DegreeSequence, Pairing, SignatureMatrix, falling, validate_sequence
from .moments import moments

BLOCK = 1024
WILSON_Z = 1.959963984540054


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def sample_pairing(d, seed=None) -> Pairing:
    """Uniform perfect matching by sequential mate selection.

    The smallest unmatched point is matched to a uniformly chosen other
    unmatched point; repeated until no point is left.
    """
    d = validate_sequence(d)
    d.require_even()
    rng = seed if isinstance(seed, np.random.Generator) else _rng(seed)
    free = list(range(d.m1))  # ascending; free[0] is the smallest unmatched point
    mate = [0] * d.m1
    while free:
        p = free.pop(0)
        q = free.pop(int(rng.integers(len(free))))
        mate[p], mate[q] = q, p
    return Pairing(d, mate)


def wilson_interval(successes: int, samples: int, z: float = WILSON_Z) -> tuple[float, float]:
    if samples <= 0:
        raise ValueError("samples must be positive")
    p = successes / samples
    denom = 1 + z * z / samples
    centre = (p + z * z / (2 * samples)) / denom
    half = z * math.sqrt(p * (1 - p) / samples + z * z / (4 * samples * samples)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass
class MonteCarloResult:
    samples: int
    successes: int
    seed: int
    wall_time: float
    interval: tuple[float, float] = (0.0, 1.0)

    @property
    def p_hat(self) -> float:
        return self.successes / self.samples

    @property
    def log_p_hat(self) -> float:
        return math.log(self.p_hat) if self.successes else float("-inf")

    @property
    def half_width(self) -> float:
        return (self.interval[1] - self.interval[0]) / 2

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "successes": self.successes,
            "p_hat": self.p_hat,
            "log_p_hat": self.log_p_hat if self.successes else None,
            "wilson95": list(self.interval),
            "seed": self.seed,
            "wall_time": self.wall_time,
        }


def default_threads() -> int:
    env = os.environ.get("DEGSEQ_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def _block_simple_count(pv: np.ndarray, n: int, size: int, seed: int, block: int) -> int:
    """Number of simple pairings among ``size`` uniform draws of one block."""
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(block,)))
    m1 = pv.shape[0]
    perm = rng.permuted(np.broadcast_to(np.arange(m1, dtype=np.int32), (size, m1)), axis=1)
    a = pv[perm[:, 0::2]]
    b = pv[perm[:, 1::2]]
    lo = np.minimum(a, b).astype(np.int64)
    hi = np.maximum(a, b).astype(np.int64)
    loop = (lo == hi).any(axis=1)
    codes = np.sort(lo * n + hi, axis=1)
    multi = (codes[:, 1:] == codes[:, :-1]).any(axis=1)
    return int(np.count_nonzero(~(loop | multi)))


def estimate_p_simple(d, samples: int, seed: int = 0, threads: int | None = None) -> MonteCarloResult:
    """Fraction of uniform pairings that are simple, with a Wilson 95% interval."""
    d = validate_sequence(d)
    d.require_even()
    if samples < 1:
        raise ValueError("samples must be >= 1")
    threads = threads or default_threads()
    pv = np.asarray(d.point_vertex, dtype=np.int32)
    t0 = time.perf_counter()
    blocks = [(b, min(BLOCK, samples - b * BLOCK)) for b in range((samples + BLOCK - 1) // BLOCK)]
    if d.m1 == 0:
        succ = samples
    elif threads == 1:
        succ = sum(_block_simple_count(pv, d.n, s, seed, b) for b, s in blocks)
    else:
        with ThreadPoolExecutor(threads) as ex:
            succ = sum(ex.map(lambda bs: _block_simple_count(pv, d.n, bs[1], seed, bs[0]), blocks))
    return MonteCarloResult(samples, succ, seed, time.perf_counter() - t0, wilson_interval(succ, samples))


def sample_signature_census(d, samples: int, seed: int = 0) -> dict[SignatureMatrix, int]:
    """Empirical signature counts over ``samples`` uniform pairings."""
    from .core import signature_of

    d = validate_sequence(d)
    rng = _rng(seed)
    out: dict[SignatureMatrix, int] = {}
    for _ in range(samples):
        s = signature_of(sample_pairing(d, rng))
        out[s] = out.get(s, 0) + 1
    return out


# --- signature statistics ---------------------------------------------------


@dataclass(frozen=True)
class PairRecord:
    i: int
    j: int
    m: int
    Z_ij: int
    W_ij: int
    W_ji: int
    Q_ij: int
    R_ij: int
    R_ji: int


@dataclass(frozen=True)
class LoopRecord:
    i: int
    m: int
    Z_ii: int
    kappa_i: float


@dataclass
class SignatureStats:
    Z: int
    Z2: int
    Z0: int
    Z3: int
    K: int
    D: int
    pairs: list[PairRecord] = field(default_factory=list)
    loops: list[LoopRecord] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "Z": self.Z, "Z2": self.Z2, "Z0": self.Z0, "Z3": self.Z3, "K": self.K, "D": self.D,
            "pairs": [{**r.__dict__, "i": r.i + 1, "j": r.j + 1} for r in self.pairs],
            "loops": [{**r.__dict__, "i": r.i + 1} for r in self.loops],
        }


def kappa_i(d: DegreeSequence, m: int, di: int, Z_ii: int, M2: int) -> float:
    M1 = d.m1
    return (m * m / M1 + (di - 2) / M1 + m * Z_ii / M1 + m * m * M2 / M1**2
            + m * M2 * (di - 2) / M1**2 + m * M2**2 / M1**3)


def signature_stats(M: SignatureMatrix, d) -> SignatureStats:
    """Evaluate every auxiliary statistic of a signature literally."""
    d = validate_sequence(d)
    M.check_for(d)
    multis = M.multis
    loops = M.loops
    Z = sum(multis.values())
    Z2 = sum(m * m for m in multis.values())
    Z0 = sum(loops.values())
    Z3 = sum(m * m for m in loops.values())
    K = sum((d[u] - 2) * m for u, m in loops.items())
    D = sum(d[u] - 2 for u, m in loops.items() if m >= 1)

    nbrs: dict[int, dict[int, int]] = {}
    for (u, v), m in multis.items():
        nbrs.setdefault(u, {})[v] = m
        nbrs.setdefault(v, {})[u] = m
    Qall = sum((d[u] - 2) * (d[v] - 2) for (u, v) in multis)

    pairs = []
    for (i, j), m in sorted(multis.items()):
        W_ij = sum(d[w] - 2 for w in nbrs[i] if w != j)
        W_ji = sum(d[w] - 2 for w in nbrs[j] if w != i)
        R_ij = sum(mm for w, mm in nbrs[i].items() if w not in (i, j))
        R_ji = sum(mm for w, mm in nbrs[j].items() if w not in (i, j))
        Q_ij = Qall - (d[i] - 2) * (d[j] - 2)
        pairs.append(PairRecord(i, j, m, Z - m, W_ij, W_ji, Q_ij, R_ij, R_ji))

    M2 = moments(d, 2).M[1]
    lrec = [LoopRecord(i, m, Z0 - m, kappa_i(d, m, d[i], Z0 - m, M2)) for i, m in sorted(loops.items())]
    return SignatureStats(Z, Z2, Z0, Z3, K, D, pairs, lrec)


@dataclass
class EtaKappa:
    eta: float
    kappa: float
    xi_M: float
    xi1: float | None = None

    @property
    def in_M_xi1(self) -> bool | None:
        return None if self.xi1 is None else self.xi_M <= self.xi1

    def to_json(self) -> dict:
        return {"eta": self.eta, "kappa": self.kappa, "xi_M": self.xi_M,
                "xi1": self.xi1, "in_M_xi1": self.in_M_xi1}


def eta_kappa_xi(M: SignatureMatrix, d, xi1: float | None = None,
                 stats: SignatureStats | None = None) -> EtaKappa:
    """``eta(M)``, ``kappa(M)`` and their sum.

    ``xi1`` defaults to ``sqrt(xi(d))`` from the master error functional.
    """
    d = validate_sequence(d)
    st = stats or signature_stats(M, d)
    mp = moments(d, 2)
    M1, M2 = mp.M[0], mp.M[1]
    loops = M.loops
    eta = (st.Z2 + st.Z * st.Z0) / M1 + M2 * st.Z2 / M1**2 + M2**2 * st.Z / M1**3
    for r in st.pairs:
        di, dj = d[r.i], d[r.j]
        eta += r.m * ((r.Z_ij + r.W_ij + r.W_ji + di - 2) / M1
                      + (di - 2) * M2 / M1**2
                      + (r.R_ij + loops.get(r.i, 0)) / di
                      + (r.R_ji + loops.get(r.j, 0)) / dj
                      + r.Q_ij / M1**2)
    kappa = math.fsum(lr.kappa_i for lr in st.loops)
    if xi1 is None:
        from .errbounds import xi_general

        xi1 = math.sqrt(xi_general(d).value)
    return EtaKappa(eta, kappa, eta + kappa, xi1)


def kappa_closed(M: SignatureMatrix, d) -> float:
    """The aggregated form of ``kappa`` in terms of ``Z_3, D, K, Z_0``."""
    d = validate_sequence(d)
    st = signature_stats(M, d)
    M1, M2 = d.m1, moments(d, 2).M[1]
    tail = sum(m * (st.Z0 - m) for m in M.loops.values())
    return (st.Z3 / M1 + st.D / M1 + st.Z3 * M2 / M1**2 + st.K * M2 / M1**2
            + st.Z0 * M2**2 / M1**3 + tail / M1)


# --- product-space signature sampler -------------------------------------------


def offdiag_masses(di: int, dj: int, m1: int) -> np.ndarray:
    """Normalised law of ``X_ij``: index 0 is the star, index ``m >= 2`` is ``m``."""
    lam = di * dj / m1
    top = min(di, dj)
    w = np.zeros(max(top, 1) + 1)
    w[0] = 1.0
    for m in range(2, top + 1):
        w[m] = falling(di, m) * falling(dj, m) / (math.factorial(m) * m1**m) / (1 + lam)
    return w / w.sum()


def loop_masses(di: int, m1: int) -> np.ndarray:
    top = di // 2
    w = np.array([falling(di, 2 * m) / ((2 * m1) ** m * math.factorial(m)) for m in range(top + 1)])
    return w / w.sum()


def poisson_tail(lam: float, m: int) -> float:
    """``P(Po(lam) >= m)`` summed upward to avoid cancellation."""
    if m <= 0:
        return 1.0
    term = math.exp(-lam + m * math.log(lam) - math.lgamma(m + 1)) if lam > 0 else 0.0
    total, k = 0.0, m
    while term > 0 and (term > 1e-300) and k < m + 10_000:
        total += term
        k += 1
        term *= lam / k
        if term < total * 1e-18:
            break
    return total


def _unrank_pair(k: int) -> tuple[int, int]:
    """``k``-th pair ``(a, b)`` with ``a < b`` in colex order."""
    b = (1 + math.isqrt(8 * k + 1)) // 2
    while b * (b - 1) // 2 > k:
        b -= 1
    while (b + 1) * b // 2 <= k:
        b += 1
    return k - b * (b - 1) // 2, b


def sample_signature_omega_star(d, seed=None) -> SignatureMatrix:
    """One draw of the product-space signature.

    Pairs are grouped by their degree classes; within a class the number of
    non-star entries is binomial and their positions are uniform, so only
    eligible non-star pairs are ever touched.
    """
    d = validate_sequence(d)
    rng = seed if isinstance(seed, np.random.Generator) else _rng(seed)
    m1 = d.m1
    classes: dict[int, list[int]] = {}
    for v, x in enumerate(d.degrees):
        if x >= 2:
            classes.setdefault(x, []).append(v)
    vals = sorted(classes, reverse=True)
    multis: dict[tuple[int, int], int] = {}
    for ia, a in enumerate(vals):
        Va = classes[a]
        for b in vals[ia:]:
            Vb = classes[b]
            p = offdiag_masses(a, b, m1)
            p_hit = 1.0 - p[0]
            npairs = len(Va) * (len(Va) - 1) // 2 if a == b else len(Va) * len(Vb)
            if npairs == 0 or p_hit <= 0:
                continue
            hits = int(rng.binomial(npairs, p_hit))
            if not hits:
                continue
            idx = rng.choice(npairs, size=hits, replace=False)
            cond = p[2:] / p_hit
            ms = 2 + rng.choice(len(cond), size=hits, p=cond)
            for k, m in zip(idx.tolist(), ms.tolist()):
                if a == b:
                    s, t = _unrank_pair(k)
                    u, v = Va[s], Va[t]
                else:
                    u, v = Va[k // len(Vb)], Vb[k % len(Vb)]
                multis[(min(u, v), max(u, v))] = m
    loops: dict[int, int] = {}
    for a in vals:
        if a < 2:
            continue
        q = loop_masses(a, m1)
        draws = rng.choice(len(q), size=len(classes[a]), p=q)
        for v, m in zip(classes[a], draws.tolist()):
            if m:
                loops[v] = m
    return SignatureMatrix(loops, multis)


def sample_offdiag(di: int, dj: int, m1: int, size: int, seed=None) -> np.ndarray:
    """Vectorised draws of one entry; 0 encodes the star."""
    rng = seed if isinstance(seed, np.random.Generator) else _rng(seed)
    p = offdiag_masses(di, dj, m1)
    return rng.choice(len(p), size=size, p=p)

