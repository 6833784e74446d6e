#pragma once

/**
 * @file ideals.hpp
 * @brief Principal ideals through their generators: membership, am and am-∞ images,
 * Lorentz towers, the small/large classification and the trace-dimension verdict.
 */

#include "classify.hpp"

#include <variant>

namespace amseq {

struct PrincipalIdeal {
    Sequence generator;
    std::optional<SeqExpr> expr;  // set when the generator is symbolic

    explicit PrincipalIdeal(Sequence g) : generator(std::move(g)) {}
    explicit PrincipalIdeal(const SeqExpr& e) : generator(compile(e)), expr(e) {}
    std::string describe() const { return "(" + generator.describe() + ")"; }
};

/// se(ω): the image of a non-summable principal ideal under the am-∞ operation. Not principal.
struct SeOmega {
    std::string describe() const { return "se(omega)"; }
};

using AmInftyImage = std::variant<PrincipalIdeal, SeOmega>;

/// Ampliations probed by membership searches.
inline std::vector<index_t> membership_ms(index_t m_max) {
    if (m_max < 1) throw domain_error("m_max must be >= 1");
    std::vector<index_t> ms;
    for (index_t m : {1, 2, 3, 4, 5, 6, 7, 8, 16, 32, 64})
        if (m <= m_max) ms.push_back(m);
    for (index_t m = 128; m <= m_max; m *= 2) ms.push_back(m);
    return ms;
}

inline constexpr index_t default_m_max = 64;

/// η ∈ Σ((ξ)): η = O(D_m ξ) for some sampled m <= m_max.
inline ClassReport member(const Sequence& eta, const PrincipalIdeal& ideal, index_t m_max = default_m_max,
                          index_t window = default_window) {
    ClassReport out;
    out.property = "member";
    out.window_hi = window;
    std::optional<ClassReport> best;
    bool all_fail = true;
    for (index_t m : membership_ms(m_max)) {
        auto dm = ampliation(ideal.generator, m);
        auto sc = detail::scan([&](index_t n) { return detail::log_ratio(eta.log_value(n), dm.log_value(n)); },
                               window, true);
        auto r = detail::sup_report("m=" + std::to_string(m), sc, window);
        r.m = m;
        // An early peak can hide growth later in the window; block maxima expose it.
        if (r.verdict == Verdict::holds && sc.block[1] > neg_inf && std::expm1(sc.block[2] - sc.block[1]) >= 0.25L) {
            bool rising = sc.block[0] < sc.block[1] &&
                          detail::sup_rule(sc.block[0], sc.block[1], sc.block[2]) == Verdict::fails;
            r.verdict = rising ? Verdict::fails : Verdict::inconclusive;
            if (rising) r.witness = sc.arg[2];
            r.constant.reset();
            r.constant_last_window.reset();
            r.notes.push_back("block maxima still growing: " + format_real(static_cast<double>(detail::safe_exp(sc.block[1]))) +
                              " -> " + format_real(static_cast<double>(detail::safe_exp(sc.block[2]))));
        }
        out.notes.push_back(r.property + ": " + to_string(r.verdict));
        all_fail &= r.verdict == Verdict::fails;
        if (r.verdict == Verdict::holds && (!best || *r.constant < *best->constant)) best = r;
        if (r.verdict == Verdict::fails && !out.witness) out.witness = r.witness;
    }
    if (best) {
        out.verdict = Verdict::holds;
        out.m = best->m;
        out.constant = best->constant;
        out.constant_last_window = best->constant_last_window;
        out.trend = best->trend;
        out.trend_at = best->trend_at;
        out.witness.reset();
    } else {
        out.verdict = all_fail ? Verdict::fails : Verdict::inconclusive;
        if (!all_fail) out.witness.reset();
    }
    return out;
}

/// Soft-interior membership: η / D_m ξ -> 0 for some sampled m <= m_max.
inline ClassReport se_member(const Sequence& eta, const PrincipalIdeal& ideal, index_t m_max = default_m_max,
                             index_t window = default_window) {
    ClassReport out;
    out.property = "se_member";
    out.window_hi = window;
    auto pts = detail::three_points(window);
    std::array<index_t, 3> from{pts[0], pts[1],
                                static_cast<index_t>(std::pow(static_cast<double>(window), 0.75))};
    bool all_fail = true;
    for (index_t m : membership_ms(m_max)) {
        auto dm = ampliation(ideal.generator, m);
        // Tail sups sup_{N_i <= n <= W}, one backward pass.
        std::array<real, 3> t{neg_inf, neg_inf, neg_inf};
        real run = neg_inf;
        bool infinite = false;
        for (index_t n = window; n >= from[0]; --n) {
            auto v = detail::log_ratio(eta.log_value(n), dm.log_value(n));
            if (v) {
                if (*v == pos_inf) infinite = true;
                run = std::max(run, *v);
            }
            for (int i = 0; i < 3; ++i)
                if (n == from[i]) t[i] = run;
        }
        Verdict v = infinite ? Verdict::fails
                             : detail::zero_rule(detail::safe_exp(t[0]), detail::safe_exp(t[1]), detail::safe_exp(t[2]));
        out.notes.push_back("m=" + std::to_string(m) + ": tail sup " + format_real(static_cast<double>(detail::safe_exp(t[2]))) +
                            " " + to_string(v));
        if (v == Verdict::holds) {
            out.verdict = Verdict::holds;
            out.m = m;
            out.constant = detail::safe_exp(t[2]);
            out.trend = {detail::safe_exp(t[0]), detail::safe_exp(t[1]), detail::safe_exp(t[2])};
            out.trend_at = from;
            return out;
        }
        all_fail &= v == Verdict::fails;
        out.trend = {detail::safe_exp(t[0]), detail::safe_exp(t[1]), detail::safe_exp(t[2])};
        out.trend_at = from;
    }
    out.verdict = all_fail ? Verdict::fails : Verdict::inconclusive;
    return out;
}

/// Mutual membership at the configured depth.
inline bool equal_at_depth(const PrincipalIdeal& a, const PrincipalIdeal& b, index_t m_max = default_m_max,
                           index_t window = default_window) {
    return member(a.generator, b, m_max, window).verdict == Verdict::holds &&
           member(b.generator, a, m_max, window).verdict == Verdict::holds;
}

inline PrincipalIdeal principal_am(const PrincipalIdeal& I) { return PrincipalIdeal(arithmetic_mean(I.generator)); }

/// (ξ_{a∞}) for summable ξ, se(ω) for non-summable ξ.
inline AmInftyImage principal_am_infty(const PrincipalIdeal& I) {
    Summable s = I.generator.summable();
    if (s == Summable::unknown)
        throw summability_error("summability of " + I.generator.describe() +
                                " is unknown; decide it with symbolic_summability first");
    if (s == Summable::no) return SeOmega{};
    return PrincipalIdeal(am_infinity(I.generator));
}

// ---------------------------------------------------------------------------
// Stabilizer towers.

/// The Lorentz level L(σ(log^m)): Σ ξ_n log^m n < ∞.
struct LorentzLevel {
    int m = 0;
    std::string describe() const { return "L(sigma(log^" + std::to_string(m) + "))"; }
    Summable contains(const SeqExpr& e) const { return lorentz_member(e, m); }
};

enum class TowerKind { am_upper, am_infty_lower };

/// Generators ω·log^m, m <= depth.
inline std::vector<SeqExpr> am_upper_tower(int depth) {
    if (depth < 0) throw domain_error("depth must be >= 0");
    std::vector<SeqExpr> out;
    for (int m = 0; m <= depth; ++m)
        out.push_back(m == 0 ? SeqExpr::omega() : SeqExpr::product({SeqExpr::omega(), SeqExpr::log(m)}));
    return out;
}

/// Lorentz descriptors σ(log^m), m <= depth.
inline std::vector<LorentzLevel> am_infty_lower_tower(int depth) {
    if (depth < 0) throw domain_error("depth must be >= 0");
    std::vector<LorentzLevel> out;
    for (int m = 0; m <= depth; ++m) out.push_back({m});
    return out;
}

/// Tower levels as printable descriptors.
inline std::vector<std::string> stabilizer_tower(TowerKind kind, int depth) {
    std::vector<std::string> out;
    if (kind == TowerKind::am_upper) {
        for (auto& e : am_upper_tower(depth)) out.push_back("(" + compile(e).describe() + ")");
    } else {
        for (auto& l : am_infty_lower_tower(depth)) out.push_back(l.describe());
    }
    return out;
}

enum class SizeClass { small, large, intermediate, unknown_at_depth };

inline std::string to_string(SizeClass c) {
    switch (c) {
        case SizeClass::small: return "small";
        case SizeClass::large: return "large";
        case SizeClass::intermediate: return "intermediate";
        case SizeClass::unknown_at_depth: return "unknown-at-depth";
    }
    return "?";
}

struct SizeReport {
    SizeClass value = SizeClass::unknown_at_depth;
    int depth = 0;
    bool caveat = true;  // depth-bounded evidence for infinite intersections/unions
    std::vector<std::string> notes;
};

/// small: inside every Lorentz level up to depth; large: contains ω·log^m up to depth.
inline SizeReport three_way_class(const PrincipalIdeal& I, int depth, index_t m_max = default_m_max,
                                  index_t window = default_window) {
    if (!I.expr) throw domain_error("three_way_class needs a symbolic generator");
    SizeReport r;
    r.depth = depth;
    bool small = true, small_fails = false;
    for (int m = 0; m <= depth; ++m) {
        Summable s = lorentz_member(*I.expr, m);
        r.notes.push_back("lorentz level " + std::to_string(m) + ": " + to_string(s));
        small &= s == Summable::yes;
        small_fails |= s == Summable::no;
    }
    if (small) {
        r.value = SizeClass::small;
        return r;
    }
    bool large = true, large_fails = false;
    for (auto& g : am_upper_tower(depth)) {
        auto rep = member(compile(g), I, m_max, window);
        r.notes.push_back("member " + compile(g).describe() + ": " + to_string(rep.verdict));
        large &= rep.verdict == Verdict::holds;
        large_fails |= rep.verdict == Verdict::fails;
    }
    if (large)
        r.value = SizeClass::large;
    else if (small_fails && large_fails)
        r.value = SizeClass::intermediate;
    return r;
}

// ---------------------------------------------------------------------------
// Trace dimension.

enum class TraceDim { zero, one, uncountable, unknown };

inline std::string to_string(TraceDim d) {
    switch (d) {
        case TraceDim::zero: return "zero";
        case TraceDim::one: return "one";
        case TraceDim::uncountable: return "uncountable";
        case TraceDim::unknown: return "unknown";
    }
    return "?";
}

struct TraceVerdict {
    TraceDim value = TraceDim::unknown;
    std::vector<std::pair<std::string, std::string>> chain;  // step -> verdict
    std::vector<std::string> notes;
    std::optional<CrossCheck> cross_check;
};

/// Dimension of the quotient of (ξ) by its commutator space.
inline TraceVerdict trace_dimension(const PrincipalIdeal& I, index_t window = default_window,
                                    index_t m_max = default_m_max) {
    TraceVerdict t;
    const auto& xi = I.generator;
    auto om = member(omega(), I, m_max, window);
    t.chain.emplace_back("omega_membership", to_string(om.verdict));
    if (om.verdict == Verdict::inconclusive) {
        t.notes.push_back("omega membership undecided on the window");
        return t;
    }
    if (om.verdict == Verdict::holds) {
        auto reg = check_regular(xi, window);
        t.chain.emplace_back("regular", to_string(reg.verdict));
        if (reg.verdict == Verdict::holds) {
            t.value = TraceDim::zero;
            t.notes.push_back("am-stable: the ideal equals its commutator space");
        } else if (reg.verdict == Verdict::fails) {
            t.value = TraceDim::uncountable;
            t.notes.push_back("omega in the ideal, generator not regular");
        }
        return t;
    }
    Summable s = xi.summable();
    t.chain.emplace_back("summable", to_string(s));
    if (s == Summable::no) {
        t.value = TraceDim::uncountable;
        t.notes.push_back("omega not in the ideal, generator not summable hence not regular at infinity");
        return t;
    }
    if (s == Summable::unknown) {
        t.notes.push_back("summability unknown");
        return t;
    }
    auto cc = cross_check_412(xi, window);
    t.chain.emplace_back("infty_regular", to_string(cc.consensus));
    t.chain.emplace_back("infty_regular_agreement", cc.agreement ? "true" : "false");
    if (cc.consensus == Verdict::holds && cc.complete) {
        t.value = TraceDim::one;
        t.notes.push_back("regular at infinity: unique trace up to scalars");
    } else if (cc.consensus == Verdict::fails) {
        t.value = TraceDim::uncountable;
        t.notes.push_back("not regular at infinity");
    } else {
        t.notes.push_back("regularity at infinity undecided");
    }
    t.cross_check = std::move(cc);
    return t;
}

// ---------------------------------------------------------------------------

/// For non-summable ξ and α in c_o^*: ᾱ_n = Σ_{j<=n} α_jξ_j / Σ_{j<=n} ξ_j decreases to 0, and
/// (αξ)_a = ᾱ·ξ_a exactly on rational prefixes up to `exact_upto`.
inline ClassReport alpha_bar_check(const Sequence& xi, const Sequence& alpha, index_t window = default_window,
                                   index_t exact_upto = 2000) {
    if (xi.summable() == Summable::yes) throw domain_error("alpha_bar_check needs a non-summable sequence");
    ClassReport r;
    r.property = "alpha_bar";
    r.window_hi = window;
    real num = neg_inf, den = neg_inf, prev = pos_inf;
    auto pts = detail::three_points(window);
    int next = 0;
    for (index_t n = 1; n <= window; ++n) {
        real lx = xi.log_value(n);
        num = log_add(num, alpha.log_value(n) + lx);
        den = log_add(den, lx);
        if (den == neg_inf) continue;
        real ab = num - den;
        if (ab > prev + 1e-12L) {
            r.verdict = Verdict::fails;
            r.witness = n;
            r.notes.push_back("alpha-bar increases at n=" + std::to_string(n));
            return r;
        }
        prev = ab;
        while (next < 3 && n == pts[next]) r.trend[next++] = detail::safe_exp(ab);
    }
    r.trend_at = pts;
    // Exact identity on the rational prefix.
    mpq_class sx(0), sax(0);
    for (index_t n = 1; n <= exact_upto; ++n) {
        auto x = xi.exact(n);
        auto a = alpha.exact(n);
        if (!x || !a) break;
        sx += *x;
        sax += *a * *x;
        if (sgn(sx) == 0) continue;
        mpq_class lhs = sax / to_mpq(n);
        mpq_class rhs = (sax / sx) * (sx / to_mpq(n));
        if (lhs != rhs) {
            r.verdict = Verdict::fails;
            r.witness = n;
            r.notes.push_back("exact identity broken at n=" + std::to_string(n));
            return r;
        }
    }
    real t2 = r.trend[1], t3 = r.trend[2];
    r.verdict = t3 == 0 ? Verdict::holds : (t3 <= 0.8L * t2 ? Verdict::holds : Verdict::inconclusive);
    r.constant = t3;
    return r;
}

}  // namespace amseq
