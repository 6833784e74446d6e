"""Reference values for tails, means and ratios of the closed-form catalog (mpmath, 40 digits)."""
import mpmath as mp

mp.mp.dps = 40


def hz(s, a):
    return mp.zeta(s, a)


def tail_log(n, r):
    """sum_{j>n} 1/(j ln^r j) by Euler-Maclaurin at n, using the closed-form integral."""
    n = mp.mpf(n)
    f = lambda x: 1 / (x * mp.log(x) ** r)
    integral = mp.log(n) ** (1 - r) / (r - 1)
    s = integral - f(n) / 2
    for k in range(1, 6):
        s -= mp.bernoulli(2 * k) / mp.factorial(2 * k) * mp.diff(f, n, 2 * k - 1)
    return s


def main():
    out = {}
    out["omega2_tail_10"] = hz(2, 11)
    out["omega2_tail_1000"] = hz(2, 1001)
    out["omega1.5_tail_100"] = hz(mp.mpf(1.5), 101)
    out["omega_log2_tail_1000"] = tail_log(1000, 2)
    out["omega_log2_ainf_1024"] = tail_log(1024, 2) / 1024
    out["omega_gm_1024"] = mp.exp(-mp.loggamma(1025) / 1024)
    n = mp.mpf(2) ** 20
    out["omega0.5_mean_ratio_2^20"] = (mp.zeta(0.5) - hz(0.5, n + 1)) / n * mp.sqrt(n)
    out["omega2_ainf_ratio_2^20"] = n * hz(2, n + 1)
    m = mp.mpf(2) ** 19
    out["omega2_varga2_2^19"] = (hz(2, m + 1) / m) / (hz(2, 2 * m + 1) / (2 * m))
    out["omega_log2_varga2_2^19"] = (tail_log(m, 2) / m) / (tail_log(2 * m, 2) / (2 * m))
    for k, v in out.items():
        print(k, mp.nstr(v, 25))


if __name__ == "__main__":
    main()
