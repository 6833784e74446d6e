#pragma once

/**
 * @file numeric.hpp
 * @brief Scalar types and log-space helpers shared by the library.
 */

#include <gmpxx.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace amseq {

using real = long double;
using index_t = std::uint64_t;

inline constexpr real neg_inf = -std::numeric_limits<real>::infinity();
inline constexpr real pos_inf = std::numeric_limits<real>::infinity();

/// Thrown for violated preconditions (bad index, wrong summability, ...).
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Thrown when a tail sum cannot be bracketed within the budget.
struct tail_unavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when an operation needs ℓ¹ membership and it is absent or unknown.
struct summability_error : std::domain_error {
    using std::domain_error::domain_error;
};

enum class Summable { yes, no, unknown };

inline const char* to_string(Summable s) {
    switch (s) {
        case Summable::yes: return "yes";
        case Summable::no: return "no";
        default: return "unknown";
    }
}

/// ln(e^a + e^b) without overflow; handles -inf.
inline real log_add(real a, real b) {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    if (a < b) std::swap(a, b);
    // The correction is at most ln 2; double precision keeps the sum exact to ~1e-16 relative.
    return a + static_cast<real>(std::log1p(std::exp(static_cast<double>(b - a))));
}

/// ln(e^a - e^b) for a >= b.
inline real log_sub(real a, real b) {
    if (b == neg_inf) return a;
    if (b >= a) return neg_inf;
    return a + std::log1p(-std::exp(b - a));
}

inline real log_of(const mpz_class& z) {
    if (sgn(z) <= 0) return neg_inf;
    long e = 0;
    double m = mpz_get_d_2exp(&e, z.get_mpz_t());
    return std::log(static_cast<real>(m)) + static_cast<real>(e) * std::log(2.0L);
}

/// ln q for q > 0, -inf for q == 0. Accurate for huge numerators/denominators.
inline real log_of(const mpq_class& q) {
    if (sgn(q) < 0) throw domain_error("log of negative rational");
    if (sgn(q) == 0) return neg_inf;
    return log_of(mpz_class(q.get_num())) - log_of(mpz_class(q.get_den()));
}

inline real to_real(const mpq_class& q) {
    real l = log_of(q);
    return l == neg_inf ? 0.0L : std::exp(l);
}

inline mpz_class to_mpz(index_t n) {
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(n), 0, 0, &n);
    return z;
}

inline mpq_class to_mpq(index_t n) { return mpq_class(to_mpz(n)); }

/// Parse "p/q", an integer, or a decimal literal ("0.125", "1e-3") exactly.
inline mpq_class parse_rational(const std::string& text) {
    std::string s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    s = s.substr(b);
    if (s.empty()) throw domain_error("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        mpz_class num, den;
        if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0)
            throw domain_error("bad rational literal '" + text + "'");
        if (den == 0) throw domain_error("zero denominator in '" + text + "'");
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    }
    std::string mant = s;
    long exp10 = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        mant = s.substr(0, epos);
        try {
            std::size_t used = 0;
            exp10 = std::stol(s.substr(epos + 1), &used);
            if (used != s.size() - epos - 1) throw std::invalid_argument("x");
        } catch (const std::exception&) {
            throw domain_error("bad exponent in '" + text + "'");
        }
    }
    bool neg = false;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
        neg = mant[0] == '-';
        mant = mant.substr(1);
    }
    auto dot = mant.find('.');
    std::string digits = mant;
    if (dot != std::string::npos) {
        digits = mant.substr(0, dot) + mant.substr(dot + 1);
        exp10 -= static_cast<long>(mant.size() - dot - 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw domain_error("bad rational literal '" + text + "'");
    mpz_class num(digits, 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    mpq_class q = exp10 < 0 ? mpq_class(num, scale) : mpq_class(num * scale);
    q.canonicalize();
    return neg ? mpq_class(-q) : q;
}

inline std::string to_string(const mpq_class& q) { return q.get_str(); }

/// Shortest round-trip text for a double.
inline std::string format_real(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}
}  // namespace amseq
