"""Index ladders m_k^(j) < n_k^(j) and drop points m_{k+1}^(N) for the minorant of n^{-1/2}, N = 3.

Uses the level data from thm78_levels.py; every quantity is a first-hit search.
"""
import mpmath as mp

from thm78_levels import levels, mu, s_mu

N, K, LEVELS = 3, 4, 40

p, s_lv = levels(LEVELS)


def level_of(i):
    l = max(j for j in range(len(p)) if p[j] <= i)
    assert l + 1 < len(p), "not enough levels"
    return l


def xi(i):
    l = level_of(i)
    x = mu(p[l]) / (l + 1)
    return x if i <= p[l] * (l + 1) ** 2 else mu(i)


def s_xi(n):
    if n < 1:
        return mp.mpf(0)
    l = level_of(n)
    x = mu(p[l]) / (l + 1)
    flat = p[l] * (l + 1) ** 2
    if n <= flat:
        return s_lv[l] + (n - p[l]) * x
    return s_lv[l] + (flat - p[l]) * x + s_mu(n) - s_mu(flat)


def drop(start, target):
    """first i >= start with xi_i <= target"""
    l = level_of(start)
    while True:
        x = mu(p[l]) / (l + 1)
        flat = p[l] * (l + 1) ** 2
        if p[l] >= start and x <= target:
            return p[l]
        if max(start, p[l] + 1) <= flat and x <= target:
            return max(start, p[l] + 1)
        i = max(mp.ceil(1 / target**2), flat + 1, start)
        while mu(i) > target:
            i += 1
        if i < p[l + 1]:
            return i
        l += 1


def ladder():
    m = mp.mpf(1)
    l = 0
    rows = []
    for k in range(1, K + 1):
        row = {}
        for j in range(N, 0, -1):
            l = max(l, k - 1)
            need, before = 3 * s_xi(m), s_xi(m - 1)
            while not (p[l] > m and s_xi(p[l]) - before >= need):
                l += 1
            row[j] = (m, p[l])
            l += 1
            m = k * p[l - 1] + 1
        kn1 = k * row[1][1]
        m = drop(kn1 + 1, xi(kn1) / N)
        rows.append((k, row, m))
    return rows


if __name__ == "__main__":
    for k, row, d in ladder():
        print(k, *(f"{mp.nstr(row[j][0], 100)}:{mp.nstr(row[j][1], 100)}" for j in range(1, N + 1)), mp.nstr(d, 100))
