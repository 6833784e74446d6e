#pragma once

/**
 * @file sequence.hpp
 * @brief Evaluatable nonincreasing sequences with tail-sum brackets.
 *
 * A Sequence is a shared handle to an immutable SeqNode. Values are served in
 * log space (ln ξ_n) so that geometric decay does not underflow; exact
 * rationals are available where the node has a closed form.
 */

#include "numeric.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace amseq {

/// Bracket [lo, hi] stored as natural logs.
struct LogInterval {
    real lo = neg_inf;
    real hi = neg_inf;
};

/// Σ_{j=n+1}^∞ ξ_j, exact or bracketed.
struct TailSum {
    index_t n = 0;
    std::optional<mpq_class> exact;
    real lo = 0, hi = 0;
    real log_lo = neg_inf, log_hi = neg_inf;

    bool is_exact() const { return exact.has_value(); }
    real mid() const { return (lo + hi) / 2; }
    real log_mid() const { return log_add(log_lo, log_hi) - std::log(2.0L); }
    /// Relative width (hi - lo) / lo, 0 for exact or zero tails.
    real rel_width() const {
        if (exact || log_hi == neg_inf) return 0;
        if (log_lo == neg_inf) return pos_inf;
        return std::expm1(log_hi - log_lo);
    }
};

/// ln T_n for 0 <= n <= N, with T_n = Σ_{j>n} ξ_j.
struct TailTable {
    std::vector<real> log_tail;
    real rel_err = 0;
    index_t size() const { return log_tail.empty() ? 0 : log_tail.size() - 1; }
};

/// ln S_n for 0 <= n <= N, with S_n = Σ_{j<=n} ξ_j.
struct PrefixTable {
    std::vector<real> log_sum;
    index_t size() const { return log_sum.empty() ? 0 : log_sum.size() - 1; }
};

inline constexpr index_t default_tail_cap = index_t{1} << 26;

class SeqNode;
class Sequence;

/// Bracket of Σ_{j>N} f(j) for the continuous envelope of a node (N >= start, N >= 2).
std::optional<LogInterval> envelope_remainder(const SeqNode& node, index_t N);
/// Bracket of Σ_{j>N} T_j / j from the envelope.
std::optional<LogInterval> envelope_second_remainder(const SeqNode& node, index_t N);

class SeqNode {
public:
    virtual ~SeqNode() = default;

    /// ln ξ_n, or -inf when ξ_n = 0. Requires n >= 1.
    virtual real log_value(index_t n) const = 0;
    virtual std::optional<mpq_class> exact_value(index_t) const { return std::nullopt; }
    virtual Summable summable() const = 0;
    /// Decision of Σ ξ_n ln^m n < ∞.
    virtual Summable lorentz(int m) const { return m == 0 ? summable() : Summable::unknown; }

    /// Exact Σ_{j>n} ξ_j when a closed form exists.
    virtual std::optional<mpq_class> exact_tail(index_t) const { return std::nullopt; }
    /// Bracket of Σ_{j>N} ξ_j without explicit summation; nullopt when N is too small.
    virtual std::optional<LogInterval> remainder(index_t N) const {
        return envelope_remainder(*this, N);
    }
    /// Bracket of Σ_{j>N} (Σ_{i>j} ξ_i)/j, the tail of ξ_{a∞}.
    virtual std::optional<LogInterval> second_remainder(index_t N) const {
        return envelope_second_remainder(*this, N);
    }

    /// ln f(e^L) for a continuous nonincreasing f with f(n) = ξ_n at integers n >= envelope_start().
    virtual std::optional<real> log_envelope(real) const { return std::nullopt; }
    /// ln(x·f(x)) at x = e^L; overridden where L - L would cancel badly.
    virtual std::optional<real> log_envelope_x(real L) const {
        auto v = log_envelope(L);
        if (!v) return v;
        return *v + L;
    }
    /// 0 when there is no envelope.
    virtual index_t envelope_start() const { return 0; }

    /// ln ξ at the (real) index e^L; closed forms only.
    virtual std::optional<real> log_value_at_log_index(real) const { return std::nullopt; }
    /// Whether log_value(n) is O(1)-ish for arbitrary n (closed form or block lookup).
    virtual bool random_access() const { return true; }
    /// Last index with a nonzero value when the support is finite (0 for the zero sequence).
    virtual std::optional<index_t> support_end() const { return std::nullopt; }
    virtual std::string describe() const = 0;

    std::shared_ptr<const TailTable> tail_table(index_t N) const;
    std::shared_ptr<const PrefixTable> prefix_table(index_t N) const;

private:
    mutable std::shared_mutex mu_;
    mutable std::shared_ptr<const TailTable> tail_cache_;
    mutable std::shared_ptr<const PrefixTable> prefix_cache_;
};

/// Value handle over an immutable node.
class Sequence {
public:
    Sequence() = default;
    explicit Sequence(std::shared_ptr<const SeqNode> node) : node_(std::move(node)) {}

    const SeqNode& node() const { return *node_; }
    std::shared_ptr<const SeqNode> ptr() const { return node_; }
    explicit operator bool() const { return static_cast<bool>(node_); }

    real log_value(index_t n) const {
        check_index(n);
        return node_->log_value(n);
    }
    real value(index_t n) const {
        real l = log_value(n);
        return l == neg_inf ? 0.0L : std::exp(l);
    }
    std::optional<mpq_class> exact(index_t n) const {
        check_index(n);
        return node_->exact_value(n);
    }
    /// ξ_n as an exact rational; throws when the node has no exact form.
    mpq_class exact_or_throw(index_t n) const {
        auto v = exact(n);
        if (!v) throw domain_error(describe() + " has no exact values");
        return *v;
    }
    Summable summable() const { return node_->summable(); }
    Summable lorentz(int m) const { return node_->lorentz(m); }
    std::string describe() const { return node_->describe(); }
    std::optional<index_t> support_end() const { return node_->support_end(); }

    /// Σ_{j>n} ξ_j with relative width <= rel_tol; direct summation doubles until the cap.
    TailSum tail(index_t n, real rel_tol = 1e-10L, index_t cap = default_tail_cap) const;
    /// As tail(), but returns the tightest bracket reached within `cap` terms instead of throwing.
    std::optional<TailSum> tail_best(index_t n, real rel_tol, index_t cap) const;

    /// ln T_n for n <= N (cached; grows on demand).
    std::shared_ptr<const TailTable> tail_table(index_t N) const { return node_->tail_table(N); }
    std::shared_ptr<const PrefixTable> prefix_table(index_t N) const { return node_->prefix_table(N); }

private:
    static void check_index(index_t n) {
        if (n == 0) throw domain_error("sequence index must be >= 1");
    }
    std::shared_ptr<const SeqNode> node_;
};

// ---------------------------------------------------------------------------

namespace detail {

/// ln ∫_0^∞ exp(lg(v)) w(v) dv, normalised at lg(0) to keep exp_sinh in range.
template <class LG, class W>
inline std::optional<std::pair<real, real>> log_integral(LG lg, W w) {
    real g0 = lg(0.0L);
    if (!std::isfinite(g0)) return std::nullopt;
    auto f = [&](real v) -> real {
        real x = lg(v) - g0;
        if (!(x > -11000)) return 0.0L;
        return std::exp(x) * w(v);
    };
    static thread_local boost::math::quadrature::exp_sinh<real> integrator;
    real err = 0, l1 = 0;
    real val;
    try {
        val = integrator.integrate(f, 1e-15L, &err, &l1);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (!(val > 0) || !std::isfinite(val)) return std::nullopt;
    err = std::max(err, val * 1e-17L);
    return std::make_pair(g0 + std::log(val), err / val);
}

/// ln ∫_a^∞ f with t = a^{e^v}; returns (ln value, relative error).
inline std::optional<std::pair<real, real>> log_envelope_integral(const SeqNode& node, real a) {
    real la = std::log(a);
    if (!(la > 0)) return std::nullopt;
    auto lg = [&](real v) -> real {
        real L = la * std::exp(v);
        if (!(L < 1e4000L)) return std::numeric_limits<real>::quiet_NaN();
        auto lf = node.log_envelope_x(L);
        if (!lf) return std::numeric_limits<real>::quiet_NaN();
        return *lf + std::log(L);
    };
    return log_integral(lg, [](real) { return 1.0L; });
}

/// ln ∫_a^∞ f(t) ln(t/a) dt.
inline std::optional<std::pair<real, real>> log_envelope_weighted_integral(const SeqNode& node, real a) {
    real la = std::log(a);
    if (!(la > 0)) return std::nullopt;
    auto lg = [&](real v) -> real {
        real L = la * std::exp(v);
        if (!(L < 1e4000L)) return std::numeric_limits<real>::quiet_NaN();
        auto lf = node.log_envelope_x(L);
        if (!lf) return std::numeric_limits<real>::quiet_NaN();
        return *lf + std::log(L);
    };
    return log_integral(lg, [la](real v) { return la * std::expm1(v); });
}

/// Convexity of the envelope at x via φ(L) = ln f(e^L): φ'' - φ' + φ'^2 >= 0.
inline bool envelope_convex_at(const SeqNode& node, real x) {
    real L = std::log(x);
    real h = 1e-3L;
    auto a = node.log_envelope(L - h), b = node.log_envelope(L), c = node.log_envelope(L + h);
    if (!a || !b || !c) return false;
    real d1 = (*c - *a) / (2 * h);
    real d2 = (*c - 2 * *b + *a) / (h * h);
    return d2 - d1 + d1 * d1 >= -1e-9L;
}

}  // namespace detail

inline std::optional<LogInterval> envelope_remainder(const SeqNode& node, index_t N) {
    index_t start = node.envelope_start();
    if (start == 0 || N < std::max<index_t>(start, 2)) return std::nullopt;
    real n = static_cast<real>(N);
    auto up = detail::log_envelope_integral(node, n);
    auto lo = detail::log_envelope_integral(node, n + 1);
    if (!up || !lo) return std::nullopt;
    LogInterval r{lo->first + std::log1p(-4 * lo->second), up->first + std::log1p(4 * up->second)};
    bool convex = true;
    for (real x = n; x < n * 1e12L && convex; x *= 8) convex = detail::envelope_convex_at(node, x);
    if (convex) {
        auto mid = detail::log_envelope_integral(node, n + 0.5L);
        auto fN1 = node.log_envelope(std::log(n + 1));
        if (mid && fN1) {
            real clo = log_add(lo->first, *fN1 - std::log(2.0L)) + std::log1p(-4 * lo->second);
            real chi = mid->first + std::log1p(4 * mid->second);
            if (clo <= chi) {
                r.lo = std::max(r.lo, clo);
                r.hi = std::min(r.hi, chi);
            }
        }
    }
    if (r.lo > r.hi) std::swap(r.lo, r.hi);
    return r;
}

inline std::optional<LogInterval> envelope_second_remainder(const SeqNode& node, index_t N) {
    index_t start = node.envelope_start();
    if (start == 0 || N < std::max<index_t>(start, 2)) return std::nullopt;
    if (node.lorentz(1) != Summable::yes) return std::nullopt;
    real n = static_cast<real>(N);
    auto up = detail::log_envelope_weighted_integral(node, n);
    auto lo = detail::log_envelope_weighted_integral(node, n + 2);
    if (!up || !lo) return std::nullopt;
    return LogInterval{lo->first + std::log1p(-4 * lo->second), up->first + std::log1p(4 * up->second)};
}

inline TailSum make_exact_tail(index_t n, const mpq_class& q) {
    TailSum t;
    t.n = n;
    t.exact = q;
    t.lo = t.hi = to_real(q);
    t.log_lo = t.log_hi = log_of(q);
    return t;
}

inline std::optional<TailSum> Sequence::tail_best(index_t n, real rel_tol, index_t cap) const {
    if (auto e = node_->exact_tail(n)) return make_exact_tail(n, *e);
    if (auto s = node_->support_end(); s && n >= *s) return make_exact_tail(n, mpq_class(0));
    Summable sm = summable();
    if (sm != Summable::yes)
        throw summability_error("tail sum needs a summable sequence; " + describe() + " has summable=" +
                                to_string(sm));
    real partial = neg_inf;  // ln Σ_{n<j<=N}
    index_t N = n;
    index_t summed = 0;
    std::optional<TailSum> best;
    while (true) {
        if (auto r = node_->remainder(N)) {
            TailSum t;
            t.n = n;
            t.log_lo = log_add(partial, r->lo);
            t.log_hi = log_add(partial, r->hi);
            t.lo = t.log_lo == neg_inf ? 0 : std::exp(t.log_lo);
            t.hi = t.log_hi == neg_inf ? 0 : std::exp(t.log_hi);
            if (!best || t.rel_width() < best->rel_width()) best = t;
            if (t.rel_width() <= rel_tol) return t;
        }
        index_t next = std::max<index_t>(2 * N, N + 64);
        if (summed + (next - N) > cap) return best;
        for (index_t j = N + 1; j <= next; ++j) partial = log_add(partial, node_->log_value(j));
        summed += next - N;
        N = next;
    }
}

inline TailSum Sequence::tail(index_t n, real rel_tol, index_t cap) const {
    auto t = tail_best(n, rel_tol, cap);
    if (!t || t->rel_width() > rel_tol)
        throw tail_unavailable("tail of " + describe() + " at n=" + std::to_string(n) + " not bracketed within " +
                               std::to_string(cap) + " terms");
    return *t;
}

inline std::shared_ptr<const TailTable> SeqNode::tail_table(index_t N) const {
    {
        std::shared_lock lock(mu_);
        if (tail_cache_ && tail_cache_->size() >= N) return tail_cache_;
    }
    std::unique_lock lock(mu_);
    if (tail_cache_ && tail_cache_->size() >= N) return tail_cache_;
    if (summable() != Summable::yes)
        throw summability_error("tail table needs a summable sequence: " + describe());
    // Round up so repeated small requests share one table.
    index_t size = 1024;
    while (size < N) size *= 2;
    auto table = std::make_shared<TailTable>();
    table->log_tail.assign(size + 1, neg_inf);
    Sequence self(std::shared_ptr<const SeqNode>(std::shared_ptr<const SeqNode>{}, this));
    // Take the best bracket within a small budget; second-level tails only bracket to first order.
    auto got = self.tail_best(size, 1e-13L, 3 * size);
    if (!got || got->rel_width() > 1e-3L)
        throw tail_unavailable("tail table of " + describe() + ": top tail not bracketed");
    const TailSum& top = *got;
    table->log_tail[size] = top.is_exact() ? top.log_lo : top.log_mid();
    table->rel_err = top.is_exact() ? 0 : top.rel_width();
    for (index_t n = size; n >= 1; --n) table->log_tail[n - 1] = log_add(table->log_tail[n], log_value(n));
    tail_cache_ = table;
    return table;
}

inline std::shared_ptr<const PrefixTable> SeqNode::prefix_table(index_t N) const {
    {
        std::shared_lock lock(mu_);
        if (prefix_cache_ && prefix_cache_->size() >= N) return prefix_cache_;
    }
    std::unique_lock lock(mu_);
    if (prefix_cache_ && prefix_cache_->size() >= N) return prefix_cache_;
    index_t size = 1024;
    while (size < N) size *= 2;
    auto table = std::make_shared<PrefixTable>();
    table->log_sum.assign(size + 1, neg_inf);
    index_t from = 1;
    if (prefix_cache_) {
        std::copy(prefix_cache_->log_sum.begin(), prefix_cache_->log_sum.end(), table->log_sum.begin());
        from = prefix_cache_->size() + 1;
    }
    for (index_t n = from; n <= size; ++n) table->log_sum[n] = log_add(table->log_sum[n - 1], log_value(n));
    prefix_cache_ = table;
    return table;
}

}  // namespace amseq
