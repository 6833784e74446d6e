#pragma once

/**
 * @file classify.hpp
 * @brief Window classifiers: Δ-conditions, regularity, regularity at infinity, Matuszewska
 * indices, Potter and Varga checks and the cross-check of the ∞-regularity characterizations.
 *
 * Every verdict is three-valued and comes from one of two statistics read at the three
 * points N1 = W^{1/4}, N2 = W^{1/2}, N3 = W of the probed range:
 *  - sup-type: running sup S(N) of a ratio; bounded when S stops growing.
 *  - inf-type: running inf I(N) of a ratio compared against a threshold.
 */

#include "expr.hpp"

#include <array>

namespace amseq {

enum class Verdict { holds, fails, inconclusive };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

inline constexpr index_t default_window = index_t{1} << 20;
inline constexpr index_t default_exact_window = index_t{1} << 17;
inline constexpr index_t default_k_cap = index_t{1} << 12;

struct ClassReport {
    std::string property;
    Verdict verdict = Verdict::inconclusive;
    index_t window_lo = 1;
    index_t window_hi = 0;
    std::optional<index_t> witness;
    std::optional<real> constant;
    std::optional<real> constant_last_window;
    std::vector<std::string> notes;
    /// Statistic at N1, N2, N3 (sup or inf of the ratio, linear scale).
    std::array<real, 3> trend{};
    std::array<index_t, 3> trend_at{};
    std::optional<index_t> m;  // membership: ampliation used
};

struct IndexEstimate {
    real alpha = 0;
    real beta = 0;
    std::array<real, 3> alpha_trend{};
    std::array<real, 3> beta_trend{};
    index_t window = 0;
    index_t k_cap = 0;
    std::size_t n_probes = 0;
    bool extended = false;            // closed-form log-index path
    bool alpha_to_minus_infinity = false;
    bool analytic_bounds_applied = false;
    std::optional<real> alpha_upper;  // −1 − inf ξ/ξ_{a∞}
    std::optional<real> beta_lower;   // −1 + inf ξ/ξ_a
};

namespace detail {

inline std::array<index_t, 3> three_points(index_t nmax) {
    if (nmax < 16) throw domain_error("window too small: need at least 16 indices, got " + std::to_string(nmax));
    auto r = [&](double e) {
        return std::max<index_t>(2, static_cast<index_t>(std::floor(std::pow(static_cast<double>(nmax), e) + 1e-9)));
    };
    return {r(0.25), r(0.5), nmax};
}

/// Running sup (or inf) of a log-ratio, read at the three points. `r` returns nullopt to skip n.
struct Scan {
    std::array<real, 3> stat{neg_inf, neg_inf, neg_inf};  // log scale
    std::array<index_t, 3> arg{};
    std::array<index_t, 3> at{};
    real last_window = neg_inf;
    index_t last_window_arg = 0;
    index_t first_infinite = 0;  // first n with +inf ratio (sup scans)
    index_t used = 0;
    /// Extremum over each block (at[i-1], at[i]] with at[-1] = 0, log scale.
    std::array<real, 3> block{neg_inf, neg_inf, neg_inf};
};

template <class F>
Scan scan(F&& r, index_t nmax, bool take_max) {
    Scan s;
    s.at = three_points(nmax);
    real sign = take_max ? 1 : -1;
    if (!take_max) s.stat = {pos_inf, pos_inf, pos_inf}, s.last_window = pos_inf, s.block = s.stat;
    real run = take_max ? neg_inf : pos_inf;
    index_t arg = 0;
    std::size_t next = 0;
    index_t lw_from = nmax / 2;
    for (index_t n = 1; n <= nmax; ++n) {
        std::optional<real> v = r(n);
        if (v) {
            if (std::isnan(*v)) throw domain_error("ratio is NaN at index " + std::to_string(n));
            ++s.used;
            if (*v == pos_inf && take_max && s.first_infinite == 0) s.first_infinite = n;
            if (sign * *v > sign * run || arg == 0) run = *v, arg = n;
            if (n > lw_from && (sign * *v > sign * s.last_window || s.last_window_arg == 0))
                s.last_window = *v, s.last_window_arg = n;
            if (next < 3 && sign * *v > sign * s.block[next]) s.block[next] = *v;
        }
        while (next < 3 && n == s.at[next]) {
            s.stat[next] = run;
            s.arg[next] = arg;
            ++next;
        }
    }
    return s;
}

inline real safe_exp(real l) { return l == neg_inf ? 0 : std::exp(l); }

/// Bounded-sup rule on log-scale sups l1 <= l2 <= l3.
inline Verdict sup_rule(real l1, real l2, real l3) {
    if (l3 == pos_inf) return Verdict::fails;
    if (l3 == neg_inf) return Verdict::holds;
    real growth = std::expm1(l3 - l2);
    if (growth <= 0.05L) return Verdict::holds;
    if (growth >= 0.25L) {
        real num = log_sub(l3, l2);
        real den = l2 > l1 ? log_sub(l2, l1) : neg_inf;
        if (den == neg_inf || num - den >= std::log(1.6L)) return Verdict::fails;
    }
    return Verdict::inconclusive;
}

/// Inf-above-threshold rule on linear infs i2 >= i3.
inline Verdict inf_rule(real i2, real i3, real threshold, real margin) {
    real e2 = i2 - threshold, e3 = i3 - threshold;
    if (!(e3 > margin)) return Verdict::fails;
    if (std::isinf(e3)) return Verdict::holds;
    real q = e3 / e2;
    if (q >= 0.95L) return Verdict::holds;
    if (q <= 0.75L) return Verdict::fails;
    return Verdict::inconclusive;
}

/// Decay-to-zero rule on tail sups t1 >= t2 >= t3 (sup over [N_i, W]).
inline Verdict zero_rule(real t1, real t2, real t3) {
    if (t3 == 0) return Verdict::holds;
    if (t2 == 0) return Verdict::inconclusive;
    real q = t3 / t2;
    if (q <= 0.8L && t2 <= t1) return Verdict::holds;
    if (q >= 0.95L) return Verdict::fails;
    return Verdict::inconclusive;
}

inline ClassReport sup_report(std::string name, const Scan& s, index_t nmax) {
    ClassReport r;
    r.property = std::move(name);
    r.window_hi = nmax;
    r.trend_at = s.at;
    for (int i = 0; i < 3; ++i) r.trend[i] = safe_exp(s.stat[i]);
    if (s.used == 0) {
        r.verdict = Verdict::inconclusive;
        r.notes.push_back("no index with a positive denominator in the window");
        return r;
    }
    if (s.first_infinite) {
        r.verdict = Verdict::fails;
        r.witness = s.first_infinite;
        r.notes.push_back("ratio infinite: zero denominator with nonzero numerator at n=" +
                          std::to_string(s.first_infinite));
        return r;
    }
    r.verdict = sup_rule(s.stat[0], s.stat[1], s.stat[2]);
    switch (r.verdict) {
        case Verdict::holds:
            r.constant = safe_exp(s.stat[2]);
            r.constant_last_window = safe_exp(s.last_window);
            break;
        case Verdict::fails:
            r.witness = s.arg[2];
            r.notes.push_back("sup keeps growing: " + format_real(static_cast<double>(r.trend[0])) + ", " +
                              format_real(static_cast<double>(r.trend[1])) + ", " +
                              format_real(static_cast<double>(r.trend[2])));
            break;
        case Verdict::inconclusive:
            r.notes.push_back("sup growth between N2 and N3 is " +
                              format_real(static_cast<double>(std::expm1(s.stat[2] - s.stat[1]))) +
                              ", neither settled nor diverging");
            break;
    }
    return r;
}

inline ClassReport inf_report(std::string name, const Scan& s, index_t nmax, real threshold, real margin) {
    ClassReport r;
    r.property = std::move(name);
    r.window_hi = nmax;
    r.trend_at = s.at;
    for (int i = 0; i < 3; ++i) r.trend[i] = safe_exp(s.stat[i]);
    if (s.used == 0) {
        r.verdict = Verdict::inconclusive;
        r.notes.push_back("no index with a positive denominator in the window");
        return r;
    }
    r.verdict = inf_rule(r.trend[1], r.trend[2], threshold, margin);
    r.constant = r.trend[2];
    r.constant_last_window = safe_exp(s.last_window);
    if (r.verdict == Verdict::fails) {
        r.witness = s.arg[2];
        if (!(r.trend[2] - threshold > margin))
            r.notes.push_back("inf " + format_real(static_cast<double>(r.trend[2])) + " not above " +
                              format_real(static_cast<double>(threshold)));
        else
            r.notes.push_back("excess over " + format_real(static_cast<double>(threshold)) +
                              " shrinks: ratio " +
                              format_real(static_cast<double>((r.trend[2] - threshold) / (r.trend[1] - threshold))));
    } else if (r.verdict == Verdict::inconclusive) {
        r.notes.push_back("excess ratio " +
                          format_real(static_cast<double>((r.trend[2] - threshold) / (r.trend[1] - threshold))) +
                          " between thresholds");
    }
    return r;
}

/// ln(a/b) with the conventions 0/0 -> skip, x/0 -> +inf.
inline std::optional<real> log_ratio(real la, real lb) {
    if (lb == neg_inf) return la == neg_inf ? std::nullopt : std::optional<real>(pos_inf);
    return la - lb;
}

/// All n <= 64, then 16 points per octave.
inline std::vector<index_t> stratified_grid(index_t nmax, index_t from = 1) {
    std::vector<index_t> g;
    for (index_t n = from; n <= std::min<index_t>(64, nmax); ++n) g.push_back(n);
    for (index_t o = 64; o < nmax; o *= 2) {
        for (int i = 1; i <= 16; ++i) {
            index_t n = o + (o * static_cast<index_t>(i)) / 16;
            if (n > nmax) break;
            if (n >= from && (g.empty() || n > g.back())) g.push_back(n);
        }
    }
    if (g.empty() || g.back() != nmax) g.push_back(nmax);
    return g;
}

inline real margin_for(const Sequence& s) { return s.node().exact_tail(1) ? 1e-6L : 1e-4L; }

inline void require_summable(const Sequence& s, const char* what) {
    Summable sm = s.summable();
    if (sm != Summable::yes)
        throw summability_error(std::string(what) + " needs a summable sequence; " + s.describe() +
                                " has summable=" + to_string(sm));
}

}  // namespace detail

// ---------------------------------------------------------------------------

/// Δ_{1/2}: sup ξ_n/ξ_{2n} < ∞, probed for n <= W/2.
inline ClassReport check_delta_half(const Sequence& s, index_t window = default_window) {
    if (s.log_value(1) == neg_inf) throw domain_error("check_delta_half: sequence is zero on the window");
    index_t nmax = window / 2;
    auto se = s.support_end();
    bool finite = false;
    auto sc = detail::scan(
        [&](index_t n) -> std::optional<real> {
            real b = s.log_value(2 * n);
            if (b == neg_inf) {
                finite = true;
                return std::nullopt;
            }
            return s.log_value(n) - b;
        },
        nmax, true);
    auto r = detail::sup_report("delta_half", sc, nmax);
    if (finite || (se && *se <= 2 * nmax)) {
        r.verdict = Verdict::inconclusive;
        r.witness.reset();
        r.notes.push_back("finite support: only the positive part was probed");
    }
    return r;
}

/// Regularity ξ_a = O(ξ).
inline ClassReport check_regular(const Sequence& s, index_t window = default_window) {
    auto a = arithmetic_mean(s);
    auto sc = detail::scan([&](index_t n) { return detail::log_ratio(a.log_value(n), s.log_value(n)); }, window,
                           true);
    return detail::sup_report("regular", sc, window);
}

/// Regularity at infinity ξ_{a∞} = O(ξ). Also records M = sup ξ/ξ_{a∞} in the notes when finite.
inline ClassReport check_infty_regular(const Sequence& s, index_t window = default_window) {
    auto A = am_infinity(s);
    auto sc = detail::scan([&](index_t n) { return detail::log_ratio(A.log_value(n), s.log_value(n)); }, window,
                           true);
    return detail::sup_report("infty_regular", sc, window);
}

/// M = sup_{n<=W} ξ_n/(ξ_{a∞})_n (nullopt when ξ_{a∞} vanishes where ξ does not).
inline std::optional<real> sup_xi_over_am_infty(const Sequence& s, index_t window = default_window) {
    auto A = am_infinity(s);
    real best = neg_inf;
    for (index_t n = 1; n <= window; ++n) {
        auto v = detail::log_ratio(s.log_value(n), A.log_value(n));
        if (!v) continue;
        if (*v == pos_inf) return std::nullopt;
        best = std::max(best, *v);
    }
    return detail::safe_exp(best);
}

// ---------------------------------------------------------------------------
// Matuszewska indices.

namespace detail {

inline bool has_log_index(const Sequence& s) { return s.node().log_value_at_log_index(1.0L).has_value(); }

/// Integer estimator: n on the stratified grid, all k <= K (k <= W/n without random access).
inline IndexEstimate integer_indices(const Sequence& s, index_t window, index_t K) {
    IndexEstimate e;
    e.window = window;
    e.k_cap = K;
    std::vector<real> lk(K + 1);
    for (index_t k = 1; k <= K; ++k) {
        lk[k] = s.log_value(k);
        if (lk[k] == neg_inf && k <= window)
            throw domain_error("matuszewska_indices: zero entry at index " + std::to_string(k));
    }
    bool ra = s.node().random_access();
    auto grid = stratified_grid(window, 2);
    auto pts = three_points(window);
    real amin = pos_inf, bmax = neg_inf;
    std::size_t next = 0;
    for (index_t n : grid) {
        index_t kmax = ra ? K : std::min<index_t>(K, window / n);
        if (kmax == 0) continue;
        real sup = neg_inf, inf = pos_inf;
        for (index_t k = 1; k <= kmax; ++k) {
            real v = s.log_value(k * n);
            if (v == neg_inf) throw domain_error("matuszewska_indices: zero entry at index " + std::to_string(k * n));
            real d = v - lk[k];
            sup = std::max(sup, d);
            inf = std::min(inf, d);
        }
        real ln = std::log(static_cast<real>(n));
        amin = std::min(amin, sup / ln);
        bmax = std::max(bmax, inf / ln);
        ++e.n_probes;
        while (next < 3 && n >= pts[next]) {
            e.alpha_trend[next] = amin;
            e.beta_trend[next] = bmax;
            ++next;
        }
    }
    for (; next < 3; ++next) e.alpha_trend[next] = amin, e.beta_trend[next] = bmax;
    e.alpha = amin;
    e.beta = bmax;
    return e;
}

/// Closed-form estimator in log-index space, ln n and ln k up to `lmax`.
inline IndexEstimate extended_indices(const Sequence& s, real lmax = 2000) {
    IndexEstimate e;
    e.extended = true;
    const auto& node = s.node();
    auto f = [&](real L) {
        auto v = node.log_value_at_log_index(L);
        if (!v) throw domain_error("extended index estimate needs a closed form");
        return *v;
    };
    const int points = 240;
    std::vector<real> Ls;
    real l0 = std::log(2.0L);
    for (int i = 0; i < points; ++i) Ls.push_back(l0 * std::pow(lmax / l0, static_cast<real>(i) / (points - 1)));
    std::vector<real> Lk{0};
    for (int i = 0; i < points; ++i) Lk.push_back(Ls[i]);
    std::vector<real> fk;
    for (real L : Lk) fk.push_back(f(L));
    real amin = pos_inf, bmax = neg_inf;
    for (int i = 0; i < points; ++i) {
        real Ln = Ls[i];
        real sup = neg_inf, inf = pos_inf;
        for (std::size_t j = 0; j < Lk.size(); ++j) {
            real d = f(Lk[j] + Ln) - fk[j];
            sup = std::max(sup, d);
            inf = std::min(inf, d);
        }
        amin = std::min(amin, sup / Ln);
        bmax = std::max(bmax, inf / Ln);
        if (i == points / 4) e.alpha_trend[0] = amin, e.beta_trend[0] = bmax;
        if (i == points / 2) e.alpha_trend[1] = amin, e.beta_trend[1] = bmax;
    }
    e.alpha_trend[2] = amin;
    e.beta_trend[2] = bmax;
    e.alpha = amin;
    e.beta = bmax;
    e.n_probes = points;
    return e;
}

inline void flag_minus_infinity(IndexEstimate& e) {
    auto& t = e.alpha_trend;
    e.alpha_to_minus_infinity = t[2] < -10 && t[2] < 1.5L * t[1];
}

}  // namespace detail

/// Matuszewska α and β from the integer estimator (window W, k <= K).
inline IndexEstimate matuszewska_indices(const Sequence& s, index_t window = default_window,
                                         index_t K = default_k_cap) {
    auto e = detail::integer_indices(s, window, K);
    detail::flag_minus_infinity(e);
    return e;
}

/// Indices from the closed form in log-index space when available, else the integer estimator.
inline IndexEstimate extended_indices(const Sequence& s, index_t window = default_window,
                                      index_t K = default_k_cap) {
    if (!detail::has_log_index(s)) return matuszewska_indices(s, window, K);
    auto e = detail::extended_indices(s);
    e.window = window;
    e.k_cap = K;
    detail::flag_minus_infinity(e);
    return e;
}

/// Certified one-sided bounds α <= −1 − inf ξ/ξ_{a∞} (summable only) and β >= −1 + inf ξ/ξ_a.
struct AnalyticBounds {
    std::optional<real> alpha_upper;
    std::optional<real> beta_lower;
};

inline AnalyticBounds analytic_bounds(const Sequence& s, index_t window = default_window) {
    AnalyticBounds b;
    auto a = arithmetic_mean(s);
    real inf_a = pos_inf;
    for (index_t n = 1; n <= window; ++n) {
        real la = a.log_value(n);
        if (la == neg_inf) throw domain_error("analytic_bounds: ξ_a vanishes at " + std::to_string(n));
        inf_a = std::min(inf_a, detail::safe_exp(s.log_value(n) - la));
    }
    b.beta_lower = -1 + inf_a;
    if (s.summable() == Summable::yes) {
        auto A = am_infinity(s);
        real inf_i = pos_inf;
        bool any = false;
        for (index_t n = 1; n <= window; ++n) {
            real lA = A.log_value(n);
            if (lA == neg_inf) continue;
            any = true;
            inf_i = std::min(inf_i, detail::safe_exp(s.log_value(n) - lA));
        }
        if (any) b.alpha_upper = -1 - inf_i;
    }
    return b;
}

// ---------------------------------------------------------------------------

/// Potter constant C* = sup_{m<=n} ξ_n (n/m)^p / ξ_m over stratified pairs.
inline ClassReport potter_fit(const Sequence& s, real p, index_t window = default_window) {
    if (!(p > 0)) throw domain_error("potter_fit: p must be > 0");
    auto grid = detail::stratified_grid(window);
    std::vector<real> lv;
    for (index_t n : grid) lv.push_back(s.log_value(n));
    // S(n) = sup over pairs with larger index n; scanned on the grid, read at three points.
    std::vector<real> best(grid.size(), neg_inf);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (lv[j] == neg_inf) continue;
        real lnj = std::log(static_cast<real>(grid[j]));
        for (std::size_t i = 0; i <= j; ++i) {
            if (lv[i] == neg_inf) continue;
            real v = lv[j] - lv[i] + p * (lnj - std::log(static_cast<real>(grid[i])));
            best[j] = std::max(best[j], v);
        }
    }
    auto sc = detail::scan(
        [&](index_t n) -> std::optional<real> {
            auto it = std::lower_bound(grid.begin(), grid.end(), n);
            if (it == grid.end() || *it != n) return std::nullopt;
            real v = best[it - grid.begin()];
            if (v == neg_inf) return std::nullopt;
            return v;
        },
        window, true);
    auto r = detail::sup_report("potter(p=" + format_real(static_cast<double>(p)) + ")", sc, window);
    return r;
}

struct VargaResult {
    ClassReport ratio;       // inf (ξ_{a∞})_n/(ξ_{a∞})_{kn} > k
    ClassReport positivity;  // inf ξ_n/(ξ_{a∞})_{kn} > 0
};

/// Varga-type checks at one k, n <= W/k.
inline VargaResult varga_check(const Sequence& s, index_t k, index_t window = default_window) {
    if (k < 2) throw domain_error("varga_check: k must be >= 2");
    auto A = am_infinity(s);
    real margin = detail::margin_for(s);
    index_t nmax = window / k;
    auto ratio = detail::scan(
        [&](index_t n) -> std::optional<real> {
            auto v = detail::log_ratio(A.log_value(n), A.log_value(k * n));
            if (v && *v == pos_inf) return std::nullopt;
            return v;
        },
        nmax, false);
    auto pos = detail::scan(
        [&](index_t n) -> std::optional<real> {
            auto v = detail::log_ratio(s.log_value(n), A.log_value(k * n));
            if (v && *v == pos_inf) return std::nullopt;
            return v;
        },
        nmax, false);
    std::string ks = std::to_string(k);
    return {detail::inf_report("varga_ratio(k=" + ks + ")", ratio, nmax, static_cast<real>(k), margin),
            detail::inf_report("varga_positivity(k=" + ks + ")", pos, nmax, 0, margin)};
}

// ---------------------------------------------------------------------------

struct CrossCheck {
    std::vector<ClassReport> conditions;  // ii, iii, iv, v, v', v'', v''', vi
    bool agreement = false;  // no condition holds while another fails
    bool complete = false;   // no condition inconclusive
    Verdict consensus = Verdict::inconclusive;
    IndexEstimate alpha_estimate;

    const ClassReport& at(const std::string& name) const {
        for (auto& c : conditions)
            if (c.property == name) return c;
        throw domain_error("no condition " + name);
    }
};

namespace detail {

inline ClassReport combine_any(std::string name, const std::vector<ClassReport>& xs) {
    ClassReport r;
    r.property = std::move(name);
    bool any_hold = false, all_fail = true;
    for (auto& x : xs) {
        any_hold |= x.verdict == Verdict::holds;
        all_fail &= x.verdict == Verdict::fails;
        r.notes.push_back(x.property + ": " + to_string(x.verdict));
        r.window_hi = std::max(r.window_hi, x.window_hi);
    }
    r.verdict = any_hold ? Verdict::holds : all_fail ? Verdict::fails : Verdict::inconclusive;
    for (auto& x : xs)
        if ((r.verdict == Verdict::holds && x.verdict == Verdict::holds) ||
            (r.verdict == Verdict::fails && x.verdict == Verdict::fails)) {
            r.constant = x.constant;
            r.witness = x.witness;
            r.trend = x.trend;
            r.trend_at = x.trend_at;
            break;
        }
    return r;
}

inline ClassReport combine_all(std::string name, const std::vector<ClassReport>& xs) {
    ClassReport r;
    r.property = std::move(name);
    bool all_hold = true, any_fail = false;
    for (auto& x : xs) {
        all_hold &= x.verdict == Verdict::holds;
        any_fail |= x.verdict == Verdict::fails;
        r.notes.push_back(x.property + ": " + to_string(x.verdict));
        r.window_hi = std::max(r.window_hi, x.window_hi);
    }
    r.verdict = any_fail ? Verdict::fails : all_hold ? Verdict::holds : Verdict::inconclusive;
    for (auto& x : xs)
        if (x.verdict == r.verdict) {
            r.constant = x.constant;
            r.witness = x.witness;
            r.trend = x.trend;
            r.trend_at = x.trend_at;
            break;
        }
    return r;
}

}  // namespace detail

/// Condition (iii): α(ξ) < −1 with a Potter fit at p' = min(2, (1 − α)/2).
inline ClassReport potter_condition(const Sequence& s, index_t window, IndexEstimate* out = nullptr) {
    auto est = extended_indices(s, window);
    if (out) *out = est;
    ClassReport r;
    r.property = "iii";
    r.window_hi = window;
    r.constant = est.alpha;
    r.notes.push_back("alpha estimate " + format_real(static_cast<double>(est.alpha)) +
                      (est.extended ? " (closed form)" : " (integer grid)"));
    if (!(est.alpha < -1.02L)) {
        r.verdict = Verdict::fails;
        r.witness = window;
        return r;
    }
    real p = est.alpha_to_minus_infinity || est.alpha < -3 ? 2.0L : std::min<real>(2, (1 - est.alpha) / 2);
    auto pf = potter_fit(s, p, window);
    r.notes.push_back(pf.property + ": " + to_string(pf.verdict));
    r.verdict = pf.verdict;
    if (pf.verdict == Verdict::fails) r.witness = pf.witness;
    return r;
}

/// Condition (iv): ξ_{a∞} is ∞-regular; needs Σ ξ_n log n < ∞ for ξ_{a∞} to be summable.
inline ClassReport iterated_condition(const Sequence& s, index_t window) {
    ClassReport r;
    r.property = "iv";
    r.window_hi = window;
    Summable l1 = s.lorentz(1);
    if (l1 == Summable::no) {
        r.verdict = Verdict::fails;
        r.notes.push_back("am_inf of the sequence is not summable (log-weighted sum diverges)");
        return r;
    }
    if (l1 == Summable::unknown) {
        r.notes.push_back("summability of am_inf unknown");
        return r;
    }
    try {
        auto inner = check_infty_regular(am_infinity(s), window);
        inner.property = "iv";
        return inner;
    } catch (const tail_unavailable& e) {
        r.notes.push_back(std::string("second-level tails unavailable: ") + e.what());
        return r;
    }
}

/// Evaluate the implemented characterizations of ∞-regularity on one window.
inline CrossCheck cross_check_412(const Sequence& s, index_t window = default_window) {
    detail::require_summable(s, "cross_check_412");
    CrossCheck cc;
    // One table large enough for the second-level tails avoids rebuilding it.
    if (s.lorentz(1) == Summable::yes && !s.support_end()) s.tail_table(std::min<index_t>(4 * window, table_cap));
    auto ii = check_infty_regular(s, window);
    ii.property = "ii";
    cc.conditions.push_back(ii);
    cc.conditions.push_back(potter_condition(s, window, &cc.alpha_estimate));
    cc.conditions.push_back(iterated_condition(s, window));

    std::vector<ClassReport> ratios, positives;
    for (index_t k : {2, 3, 4}) {
        auto v = varga_check(s, k, window);
        ratios.push_back(v.ratio);
        positives.push_back(v.positivity);
    }
    cc.conditions.push_back(detail::combine_any("v", ratios));
    cc.conditions.push_back(detail::combine_all("v'", ratios));
    cc.conditions.push_back(detail::combine_all("v''", positives));
    cc.conditions.push_back(detail::combine_any("v'''", positives));

    // (vi): sup_k inf_n (ξ_{a∞})_n / (k (ξ_{a∞})_{kn}) = ∞.
    {
        ClassReport r;
        r.property = "vi";
        r.window_hi = window;
        auto A = am_infinity(s);
        real margin = detail::margin_for(s);
        std::vector<real> vk;
        Verdict last = Verdict::inconclusive;
        for (index_t k : {2, 4, 8, 16, 32, 64}) {
            index_t nmax = window / k;
            auto sc = detail::scan(
                [&](index_t n) -> std::optional<real> {
                    auto v = detail::log_ratio(A.log_value(n), A.log_value(k * n));
                    if (v && *v == pos_inf) return std::nullopt;
                    if (v) *v -= std::log(static_cast<real>(k));
                    return v;
                },
                nmax, false);
            auto rep = detail::inf_report("k=" + std::to_string(k), sc, nmax, 1, margin);
            vk.push_back(rep.trend[2]);
            last = rep.verdict;
            if (rep.verdict == Verdict::fails) r.witness = rep.witness;
            r.notes.push_back("k=" + std::to_string(k) + ": inf/k=" + format_real(static_cast<double>(rep.trend[2])) +
                              " " + to_string(rep.verdict));
        }
        bool growing = vk.back() >= 1.3L * vk.front() && vk.back() > vk[2] && vk[2] > vk.front();
        if (last == Verdict::fails)
            r.verdict = Verdict::fails;
        else if (last == Verdict::holds && growing)
            r.verdict = Verdict::holds;
        else
            r.verdict = Verdict::inconclusive;
        r.constant = vk.back();
        cc.conditions.push_back(r);
    }

    bool any_h = false, any_f = false, any_i = false;
    for (auto& c : cc.conditions) {
        any_h |= c.verdict == Verdict::holds;
        any_f |= c.verdict == Verdict::fails;
        any_i |= c.verdict == Verdict::inconclusive;
    }
    cc.agreement = !(any_h && any_f);
    cc.complete = !any_i;
    cc.consensus = !cc.agreement ? Verdict::inconclusive
                   : any_h       ? Verdict::holds
                   : any_f       ? Verdict::fails
                                 : Verdict::inconclusive;
    return cc;
}

}  // namespace amseq
