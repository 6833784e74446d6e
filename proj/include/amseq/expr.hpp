#pragma once

/**
 * @file expr.hpp
 * @brief SeqExpr: the symbolic catalog AST, its compilation to Sequence and the
 * symbolic summability / Lorentz rules.
 */

#include "transforms.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <map>
#include <mutex>

namespace amseq {

struct SeqExpr {
    enum class Kind {
        omega_pow,
        log_pow,
        geom,
        ampliation,
        dilution,
        scale,
        sum,
        min,
        max,
        product,
        prefix_override,
        piecewise,
        prefix
    };

    Kind kind = Kind::omega_pow;
    double exponent = 1;              // omega_pow, log_pow
    mpq_class rational;               // geom ratio, scale factor
    index_t m = 1;                    // ampliation, dilution
    std::string name;                 // piecewise rule name, prefix path
    std::vector<mpq_class> values;    // prefix / override values
    std::vector<SeqExpr> children;

    static SeqExpr omega(double p = 1) { return leaf(Kind::omega_pow, p); }
    static SeqExpr log(double r = 1) { return leaf(Kind::log_pow, r); }
    static SeqExpr geom(mpq_class q) {
        SeqExpr e;
        e.kind = Kind::geom;
        e.rational = std::move(q);
        return e;
    }
    static SeqExpr ampl(index_t m, SeqExpr c) { return wrap(Kind::ampliation, m, std::move(c)); }
    static SeqExpr dil(index_t m, SeqExpr c) { return wrap(Kind::dilution, m, std::move(c)); }
    static SeqExpr scale(mpq_class c, SeqExpr child) {
        SeqExpr e;
        e.kind = Kind::scale;
        e.rational = std::move(c);
        e.children.push_back(std::move(child));
        return e;
    }
    static SeqExpr sum(std::vector<SeqExpr> xs) { return nary(Kind::sum, std::move(xs)); }
    static SeqExpr min(std::vector<SeqExpr> xs) { return nary(Kind::min, std::move(xs)); }
    static SeqExpr max(std::vector<SeqExpr> xs) { return nary(Kind::max, std::move(xs)); }
    /// Product; nested products are flattened and single factors unwrapped.
    static SeqExpr product(std::vector<SeqExpr> xs) {
        std::vector<SeqExpr> flat;
        for (auto& x : xs) {
            if (x.kind == Kind::product)
                for (auto& y : x.children) flat.push_back(y);
            else
                flat.push_back(std::move(x));
        }
        if (flat.size() == 1) return flat[0];
        return nary(Kind::product, std::move(flat));
    }
    static SeqExpr override_prefix(std::vector<mpq_class> vals, SeqExpr child) {
        SeqExpr e;
        e.kind = Kind::prefix_override;
        e.values = std::move(vals);
        e.children.push_back(std::move(child));
        return e;
    }
    static SeqExpr pw(std::string rule) {
        SeqExpr e;
        e.kind = Kind::piecewise;
        e.name = std::move(rule);
        return e;
    }
    static SeqExpr prefix(std::string path, std::vector<mpq_class> vals) {
        SeqExpr e;
        e.kind = Kind::prefix;
        e.name = std::move(path);
        e.values = std::move(vals);
        return e;
    }

    friend bool operator==(const SeqExpr& a, const SeqExpr& b) {
        if (a.kind != b.kind) return false;
        switch (a.kind) {
            case Kind::omega_pow:
            case Kind::log_pow: return a.exponent == b.exponent;
            case Kind::geom: return a.rational == b.rational;
            case Kind::ampliation:
            case Kind::dilution: return a.m == b.m && a.children == b.children;
            case Kind::scale: return a.rational == b.rational && a.children == b.children;
            case Kind::sum:
            case Kind::min:
            case Kind::max:
            case Kind::product: return a.children == b.children;
            case Kind::prefix_override: return a.values == b.values && a.children == b.children;
            case Kind::piecewise: return a.name == b.name;
            case Kind::prefix: return a.name == b.name && a.values == b.values;
        }
        return false;
    }
    friend bool operator!=(const SeqExpr& a, const SeqExpr& b) { return !(a == b); }

private:
    static SeqExpr leaf(Kind k, double x) {
        SeqExpr e;
        e.kind = k;
        e.exponent = x;
        return e;
    }
    static SeqExpr wrap(Kind k, index_t m, SeqExpr c) {
        SeqExpr e;
        e.kind = k;
        e.m = m;
        e.children.push_back(std::move(c));
        return e;
    }
    static SeqExpr nary(Kind k, std::vector<SeqExpr> xs) {
        SeqExpr e;
        e.kind = k;
        e.children = std::move(xs);
        return e;
    }
};

// ---------------------------------------------------------------------------
// Piecewise rule registry.

PwRule ex45iii_rule();
PwRule ex422_rule();

namespace detail {
inline std::mutex& rule_mutex() {
    static std::mutex m;
    return m;
}
/// Built-in rules are present from first use; callers hold rule_mutex().
inline std::map<std::string, PwRule>& rule_table() {
    static std::map<std::string, PwRule> t{{"ex45iii", ex45iii_rule()}, {"ex422", ex422_rule()}};
    return t;
}
}  // namespace detail

/// n_k = k!·n_{k-1} (n_1 = 1), ε_k = 4^{-k}/n_k, so ε_k n_k = 4^{-k}.
inline PwRule ex45iii_rule() {
    PwRule r;
    r.name = "ex45iii";
    r.breakpoint = [](int k) {
        mpz_class n(1);
        for (int j = 2; j <= k; ++j) {
            mpz_class f;
            mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(j));
            n *= f;
        }
        return n;
    };
    auto bp = r.breakpoint;
    r.value = [bp](int k) {
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 4, static_cast<unsigned long>(k));
        den *= bp(k);
        return mpq_class(mpz_class(1), den);
    };
    r.summable = Summable::yes;
    r.lorentz = [](int) { return Summable::yes; };
    r.log_mass_after = [](int K) { return -K * std::log(4.0L) - std::log(3.0L); };
    r.log_weighted_mass_after = [](int K) {
        real k1 = K + 1;
        return std::log(2.0L) - k1 * std::log(4.0L) + std::log(1 + k1 * k1 * std::log(k1));
    };
    return r;
}

/// m_k = (k!)^2, η_j = 1/m_k^2 on (m_{k-1}, m_k].
inline PwRule ex422_rule() {
    PwRule r;
    r.name = "ex422";
    r.breakpoint = [](int k) {
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
        return mpz_class(f * f);
    };
    auto bp = r.breakpoint;
    r.value = [bp](int k) {
        mpz_class m = bp(k);
        return mpq_class(mpz_class(1), mpz_class(m * m));
    };
    r.summable = Summable::yes;
    r.lorentz = [](int) { return Summable::yes; };
    auto log_m = [](int k) { return 2 * boost::math::lgamma(static_cast<real>(k) + 1); };
    r.log_mass_after = [log_m](int K) { return std::log(2.0L) - log_m(K + 1); };
    r.log_weighted_mass_after = [log_m](int K) {
        return std::log(2.0L) + std::log(1 + log_m(K + 1)) - log_m(K + 1) + std::log(2.0L);
    };
    return r;
}

inline void register_pw_rule(PwRule rule) {
    std::lock_guard lock(detail::rule_mutex());
    detail::rule_table()[rule.name] = std::move(rule);
}

inline PwRule find_pw_rule(const std::string& name) {
    std::lock_guard lock(detail::rule_mutex());
    auto& t = detail::rule_table();
    auto it = t.find(name);
    if (it == t.end()) throw domain_error("unknown piecewise rule '" + name + "'");
    return it->second;
}

inline std::vector<std::string> pw_rule_names() {
    std::lock_guard lock(detail::rule_mutex());
    std::vector<std::string> out;
    for (auto& [k, v] : detail::rule_table()) out.push_back(k);
    return out;
}

// ---------------------------------------------------------------------------

/// Build the evaluatable sequence described by an expression.
inline Sequence compile(const SeqExpr& e) {
    using K = SeqExpr::Kind;
    switch (e.kind) {
        case K::omega_pow:
            if (!(e.exponent > 0)) throw domain_error("omega exponent must be > 0");
            return omega_pow(e.exponent);
        case K::log_pow:
            if (!(e.exponent < 0)) throw domain_error("a bare log factor must have a negative exponent");
            return monomial(mpq_class(1), 0.0, e.exponent);
        case K::geom: return geom(e.rational);
        case K::ampliation: return ampliation(compile(e.children.at(0)), e.m);
        case K::dilution: return dilution(compile(e.children.at(0)), e.m);
        case K::scale: return scale(e.rational, compile(e.children.at(0)));
        case K::sum:
        case K::min:
        case K::max: {
            std::vector<Sequence> xs;
            for (auto& c : e.children) xs.push_back(compile(c));
            auto op = e.kind == K::sum ? CombineNode::Op::sum
                                       : e.kind == K::min ? CombineNode::Op::min : CombineNode::Op::max;
            return combine(op, std::move(xs));
        }
        case K::product: {
            double p = 0, r = 0;
            std::optional<mpq_class> q;
            bool any_mono = false;
            std::vector<Sequence> others;
            for (auto& f : e.children) {
                switch (f.kind) {
                    case K::omega_pow: p += f.exponent, any_mono = true; break;
                    case K::log_pow: r += f.exponent, any_mono = true; break;
                    case K::geom:
                        q = q ? mpq_class(*q * f.rational) : f.rational;
                        any_mono = true;
                        break;
                    default: others.push_back(compile(f));
                }
            }
            if (others.empty()) return monomial(mpq_class(1), p, r, q);
            if (any_mono && !(p == 0 && r == 0 && !q)) {
                bool increasing = (!q && (p < 0 || (p == 0 && r > 0)));
                if (increasing) throw domain_error("product factor is not nonincreasing");
                others.insert(others.begin(), monomial(mpq_class(1), p, r, q));
            }
            return combine(CombineNode::Op::product, std::move(others));
        }
        case K::prefix_override: return prefix_override(e.values, compile(e.children.at(0)));
        case K::piecewise: return piecewise(find_pw_rule(e.name));
        case K::prefix: return finite_sequence(e.values, "prefix(" + e.name + ")");
    }
    throw domain_error("unhandled expression kind");
}

/// Exact ℓ¹ decision from the symbolic rules (unknown outside them).
inline Summable symbolic_summability(const SeqExpr& e) { return compile(e).summable(); }

/// Decision of Σ ξ_n ln^m n < ∞ (membership in the Lorentz level m).
inline Summable lorentz_member(const SeqExpr& e, int m) {
    if (m < 0) throw domain_error("Lorentz level must be >= 0");
    return compile(e).lorentz(m);
}

}  // namespace amseq
