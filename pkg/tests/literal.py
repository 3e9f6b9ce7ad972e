"""Slow, literal evaluators written straight from the definitions; used as oracles."""

from fractions import Fraction


def ff(x, k):
    if x < k:
        return 0
    out = 1
    for t in range(k):
        out *= x - t
    return out


def U_literal(d):
    d = list(d)
    n, M = len(d), sum(d)
    F = Fraction

    def mn(a, b):
        return min(F(a), F(b))

    U1 = sum((x - 2) * mn(F(ff(x, 2), M), 1) for x in d)
    U2 = sum(mn(F(ff(d[u], 2) * ff(d[v], 2), M * M), F(d[u] * d[v], M))
             for u in range(n) for v in range(u + 1, n))
    U3 = U4 = U5 = F(0)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            a = mn(F(ff(d[i], 2) * ff(d[j], 2), M * M), F(d[i] * d[j], M))
            U4 += mn(F(ff(d[i], 3) * ff(d[j], 2), M * M), F(ff(d[i], 2) * d[j], M))
            b = mn(F(d[i] * ff(d[j], 2), M * M), F(d[j], M))
            for w in range(n):
                U3 += a * mn(F(ff(d[i] - 2, 2) * ff(d[w], 2), M * M), 1) * (d[w] - 2)
                U5 += b * mn(F(ff(d[i] - 2, 2) * ff(d[w], 2), M * M), F(max(d[i] - 2, 0) * d[w], M))
    return U1, U2, U3, U4, U5


def xi_literal(d):
    M = sum(d)
    M2 = sum(ff(x, 2) for x in d)
    M3 = sum(ff(x, 3) for x in d)
    U1, U2, U3, U4, U5 = U_literal(d)
    F = Fraction
    return (U5 + F(U1 + U2**2 + U3, M) + U4 * F(M2, M**2) + U2 * F(M2**2, M**3)
            + F(M2, M**2) + F(M3 * M2, M**3) + F(M2**3, M**4))
