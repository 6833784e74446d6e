"""Level indices p_l of the irregular minorant of mu_n = n^{-1/2}.

Partial sums of mu come from the Hurwitz zeta function:
    S_mu(N) = zeta(1/2) - zeta(1/2, N + 1).
"""
import mpmath as mp

mp.mp.dps = 200


def s_mu(n):
    return mp.zeta(mp.mpf(1) / 2) - mp.zeta(mp.mpf(1) / 2, n + 1)


def mu(n):
    return 1 / mp.sqrt(n)


def levels(count):
    p = [mp.mpf(1)]
    xi_p = [mu(1)]
    s_xi = [mu(1)]  # S_xi(p_l)
    for l in range(1, count):
        pl, xl, sl = p[-1], xi_p[-1], s_xi[-1]
        flat_end = pl * l * l  # mu_i >= xi_{p_l} iff i <= p_l l^2

        def s_xi_at(n):
            if n <= flat_end:
                return sl + (n - pl) * xl
            return sl + (flat_end - pl) * xl + s_mu(n) - s_mu(flat_end)

        def g(n):
            return s_xi_at(n) - mp.mpf(3) / 4 * s_mu(n)

        if g(pl) >= 0:
            n = pl
        else:
            lo = mp.floor(pl * (mp.mpf(3) * l / 4) ** 2)
            hi = max(lo, pl + 1)
            while g(hi) < 0:
                hi *= 2
            # invariant: g(lo) < 0 <= g(hi)
            if g(lo) >= 0:
                hi = lo
                lo = pl
            while hi - lo > 1:
                mid = mp.floor((lo + hi) / 2)
                if g(mid) >= 0:
                    hi = mid
                else:
                    lo = mid
            n = hi
        q = max(n + 1, mp.mpf(3))
        x = mu(q) / (l + 1)
        p.append(q)
        xi_p.append(x)
        s_xi.append(s_xi_at(q - 1) + x)
    return p, s_xi


if __name__ == "__main__":
    p, s = levels(20)
    for l, (a, b) in enumerate(zip(p, s), start=1):
        print(l, mp.nstr(a, 60), mp.nstr(b / s_mu(a), 20))
