#!/usr/bin/env python3
"""High-precision reference values for the closed-form bounds.

Independent of the Rust implementation: plain formulas evaluated with
mpmath at 60 decimal digits. The Rust test-suite freezes these numbers.
"""
from mpmath import mp, mpf, sqrt, exp, log, cbrt, fsum
from fractions import Fraction
from itertools import permutations, product

mp.dps = 60


def r(n, m, q):
    return mpf(q) / mpf(2) ** (mpf(n + m) / 2)


def hall(n, m, q):
    x = r(n, m, q)
    return 5 * x ** (mpf(2) / 3) + mpf(1) / 2 * x ** 3 / mpf(2) ** (mpf(n - 7 * m) / 2)


def gg_small(n, m, q):
    x = r(n, m, q)
    return 2 * cbrt(2) * x ** (mpf(2) / 3) + 2 * sqrt(2) / sqrt(3) * x ** (mpf(3) / 2) + x ** 2


def gg_large(n, m, q):
    x = r(n, m, q)
    return 3 * x ** (mpf(2) / 3) + 2 * x + 5 * x ** 2 + mpf(1) / 2 * (2 * x) ** (mpf(n) / (n - m))


def stam(n, m, q):
    N = mpf(2) ** n
    return mpf(1) / 2 * sqrt((mpf(2) ** (n - m) - 1) * q * (q - 1) / ((N - 1) * (N - (q - 1))))


def birthday_exact(n, q):
    p = mpf(1)
    for k in range(1, q):
        p *= 1 - mpf(k) / mpf(2) ** n
    return 1 - p


def chain(n, q):
    N = mpf(2) ** n
    return (1 - exp(-q * (q - 1) / (2 * N)),
            1 - (1 - q / (2 * N)) ** (q - 1),
            1 - (1 - q / N) ** (mpf(q - 1) / 2),
            q * (q - 1) / (2 * N))


def brute_tv_kl(n, m, q):
    """TV and KL by listing every transcript and every ordered distinct tuple."""
    B, N = 2 ** (n - m), 2 ** n
    perm = {}
    total = 0
    for tup in permutations(range(N), q):
        w = tuple(v >> m for v in tup)
        perm[w] = perm.get(w, 0) + 1
        total += 1
    tv = Fraction(0)
    kl = []
    for w in product(range(B), repeat=q):
        pp = Fraction(perm.get(w, 0), total)
        pf = Fraction(1, B ** q)
        tv += abs(pp - pf)
        if pp:
            kl.append(mpf(pp.numerator) / pp.denominator * log(mpf((pp / pf).numerator) / (pp / pf).denominator))
    return tv / 2, fsum(kl)


if __name__ == "__main__":
    print("hall(28,0,2^10)      =", mp.nstr(hall(28, 0, 2 ** 10), 20))
    print("gg_small(28,0,2^10)  =", mp.nstr(gg_small(28, 0, 2 ** 10), 20))
    print("gg_large(16,8,2^8)   =", mp.nstr(gg_large(16, 8, 2 ** 8), 20))
    print("stam(4,1,2)          =", mp.nstr(stam(4, 1, 2), 20))
    print("stam(2,1,3)          =", mp.nstr(stam(2, 1, 3), 20))
    for q in range(2, 9):
        print(f"stam(4,1,{q})          =", mp.nstr(stam(4, 1, q), 20))
    print("hall(7,1,16)         =", mp.nstr(hall(7, 1, 16), 20))
    print("birthday_exact(8,20) =", mp.nstr(birthday_exact(8, 20), 20))
    print("birthday_exact(40,2^16) =", mp.nstr(birthday_exact(40, 2 ** 16), 20))
    print("chain(2,2)           =", [mp.nstr(v, 20) for v in chain(2, 2)])
    print("chain(20,1024)       =", [mp.nstr(v, 20) for v in chain(20, 1024)])
    for (n, m, q) in [(2, 1, 2), (2, 1, 3), (2, 1, 4), (3, 1, 3)]:
        tv, kl = brute_tv_kl(n, m, q)
        print(f"brute tv/kl({n},{m},{q}) =", tv, mp.nstr(kl, 20))

    # birthday product at large q through log-gamma
    def birthday_lgamma(n, q, dps):
        with mp.workdps(dps):
            N = mpf(2) ** n
            Q = mpf(q - 1)
            t = mp.loggamma(N) - mp.loggamma(N - Q) - Q * log(N)
            return -mp.expm1(t)
    print("birthday(64,2^20+1)  =", mp.nstr(birthday_lgamma(64, 2 ** 20 + 1, 100), 20))
    print("birthday(64,2^20+2)  =", mp.nstr(birthday_lgamma(64, 2 ** 20 + 2, 100), 20))
    print("birthday(256,2^100)  =", mp.nstr(birthday_lgamma(256, 2 ** 100, 200), 20))
