"""Blocks of the minorant iteration on the demo input, via harmonic numbers at 50 digits.

xi_1 = 1, xi_n = c_k / n on (10^(k-1), 10^k] with c_k = 2^-k (k <= 12), 2^-12/(k-11) after.
alpha_n = 2^(1-n).
Block sums are c_k (H_b - H_a) per decade; m is found by bisection.
"""
from fractions import Fraction as F

import mpmath as mp

mp.mp.dps = 50


def decade(n):
    return len(str(n - 1))  # n in (10^(k-1), 10^k]


def c(k):
    return F(1, 2**k) if k <= 12 else F(1, 2**12) / (k - 11)


def xi(n):
    return F(1) if n == 1 else c(decade(n)) / n


def alpha(n):
    return F(2, 2**n)


def block_sum(a, b):
    """sum_{a <= i <= b} xi_i"""
    s = mp.mpf(0)
    if a == 1:
        s += 1
        a = 2
    while a <= b:
        k = decade(a)
        top = min(b, 10**k)
        ck = c(k)
        s += mp.mpf(ck.numerator) / ck.denominator * (mp.harmonic(top) - mp.harmonic(a - 1))
        a = top + 1
    return s


def blocks(count):
    out = []
    n = 1
    for k in range(1, count + 1):
        bound = F(1, 2**k)
        while not (n * xi(n) <= bound and alpha(n) <= bound):
            n += 1
        target = mp.mpf(1) if k == 1 else mp.mpf(2) / 2**k
        lo, hi = n - 1, n
        while block_sum(n, hi) < target:
            lo, hi = hi, 2 * hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if block_sum(n, mid) >= target:
                hi = mid
            else:
                lo = mid
        out.append((k, n, hi, mp.nstr(block_sum(n, hi), 17)))
        n = hi + 1
    return out


if __name__ == "__main__":
    for row in blocks(6):
        print(*row)
