#pragma once

/**
 * @file nodes.hpp
 * @brief Closed-form, finite, piecewise and combinator sequence nodes.
 */

#include "sequence.hpp"

#include <functional>
#include <sstream>

namespace amseq {

/// Eventual growth class c·n^{-P}·(ln n)^R·Q^n used to decide summability of combinations.
struct AsymKey {
    real log_q = 0;  // ln Q <= 0
    real p = 0;
    real r = 0;

    /// Σ ξ_n ln^m n < ∞ for a sequence of this class.
    Summable lorentz(int m) const {
        if (log_q < 0) return Summable::yes;
        if (p > 1) return Summable::yes;
        if (p == 1 && r + m < -1) return Summable::yes;
        return Summable::no;
    }
    /// Strict eventual order (smaller sequence first).
    friend bool eventually_smaller(const AsymKey& a, const AsymKey& b) {
        if (a.log_q != b.log_q) return a.log_q < b.log_q;
        if (a.p != b.p) return a.p > b.p;
        return a.r < b.r;
    }
};

class KeyedNode : public SeqNode {
public:
    virtual std::optional<AsymKey> asym_key() const { return std::nullopt; }
    Summable lorentz(int m) const override {
        if (auto k = asym_key()) return k->lorentz(m);
        return fallback_lorentz(m);
    }
    Summable summable() const override { return lorentz(0); }

protected:
    virtual Summable fallback_lorentz(int) const { return Summable::unknown; }
};

inline std::optional<AsymKey> key_of(const Sequence& s) {
    if (auto k = dynamic_cast<const KeyedNode*>(&s.node())) return k->asym_key();
    return std::nullopt;
}

// ---------------------------------------------------------------------------

/**
 * c·n^{-P}·(ln n)^R·Q^n, held constant below n0 (the first index from which the
 * continuous form is nonincreasing).
 */
class MonomialNode final : public KeyedNode {
public:
    MonomialNode(mpq_class c, double p, double r, std::optional<mpq_class> q)
        : c_(std::move(c)), p_(p), r_(r), q_(std::move(q)) {
        if (sgn(c_) <= 0) throw domain_error("monomial coefficient must be positive");
        lc_ = log_of(c_);
        if (q_) {
            if (sgn(*q_) <= 0 || *q_ >= 1) throw domain_error("geometric ratio must lie in (0,1)");
            lq_ = log_of(*q_);
        }
        bool null = lq_ < 0 || p_ > 0 || (p_ == 0 && r_ < 0);
        if (!null) throw domain_error("sequence does not converge to 0: " + describe());
        n0_ = compute_n0();
        ln0_ = std::log(static_cast<real>(n0_));
    }

    real log_at(real x) const {
        real v = lc_ - p_ * std::log(x);
        if (r_ != 0) v += r_ * std::log(std::log(x));
        if (q_) v += x * lq_;
        return v;
    }
    real log_value(index_t n) const override { return log_at(static_cast<real>(std::max(n, n0_))); }
    std::optional<mpq_class> exact_value(index_t n) const override {
        if (r_ != 0 || p_ != std::floor(p_) || std::fabs(p_) > 64) return std::nullopt;
        if (q_ && n > 200000) return std::nullopt;
        mpq_class v = c_;
        long ip = static_cast<long>(p_);
        mpz_class np;
        mpz_pow_ui(np.get_mpz_t(), to_mpz(n).get_mpz_t(), static_cast<unsigned long>(ip < 0 ? -ip : ip));
        if (ip > 0) v /= np;
        else if (ip < 0) v *= np;
        if (q_) v *= pow_q(n);
        v.canonicalize();
        return v;
    }
    std::optional<mpq_class> exact_tail(index_t n) const override {
        if (!q_ || p_ != 0 || r_ != 0 || n > 200000) return std::nullopt;
        mpq_class t = c_ * pow_q(n + 1) / (1 - *q_);
        t.canonicalize();
        return t;
    }
    std::optional<real> log_envelope(real L) const override {
        real v = lc_ - p_ * L;
        if (r_ != 0) v += r_ * std::log(L);
        if (q_) v += (L > 11000 ? neg_inf : std::exp(L) * lq_);
        return v;
    }
    std::optional<real> log_envelope_x(real L) const override {
        real v = lc_ + (1 - p_) * L;
        if (r_ != 0) v += r_ * std::log(L);
        if (q_) v += (L > 11000 ? neg_inf : std::exp(L) * lq_);
        return v;
    }
    index_t envelope_start() const override { return n0_; }
    std::optional<real> log_value_at_log_index(real L) const override { return log_envelope(std::max(L, ln0_)); }
    std::optional<AsymKey> asym_key() const override { return AsymKey{lq_, p_, r_}; }
    std::string describe() const override {
        std::ostringstream os;
        os << "monomial(c=" << c_.get_str() << ", p=" << format_real(p_) << ", r=" << format_real(r_);
        if (q_) os << ", q=" << q_->get_str();
        os << ")";
        return os.str();
    }

    index_t n0() const { return n0_; }
    double p() const { return p_; }
    double r() const { return r_; }
    const mpq_class& coeff() const { return c_; }
    const std::optional<mpq_class>& ratio() const { return q_; }

private:
    mpq_class pow_q(index_t n) const {
        mpz_class a, b;
        mpz_pow_ui(a.get_mpz_t(), q_->get_num_mpz_t(), n);
        mpz_pow_ui(b.get_mpz_t(), q_->get_den_mpz_t(), n);
        return mpq_class(a, b);
    }

    // d/du ln f with u = ln x.
    real slope(real u) const { return -p_ + (r_ != 0 ? r_ / u : 0) + (q_ ? std::exp(u) * lq_ : 0); }

    index_t compute_n0() const {
        const real umax = 43.0L;
        if (r_ == 0) {
            if (p_ >= 0) return 1;
            real u = std::log(static_cast<real>(p_) / lq_);
            return finish(u, 1);
        }
        real ulo = std::log(2.0L);
        if (r_ < 0 && p_ >= 0) return 2;
        if (r_ > 0) {
            if (slope(ulo) <= 0) return 2;
            if (slope(umax) > 0) throw domain_error("flat extension index too large for " + describe());
            real a = ulo, b = umax;
            for (int i = 0; i < 200; ++i) {
                real m = (a + b) / 2;
                (slope(m) > 0 ? a : b) = m;
            }
            return finish(b, 2);
        }
        // r < 0, p < 0, q < 1: slope rises then falls; find the last crossing.
        real a = ulo, b = umax;
        for (int i = 0; i < 200; ++i) {  // argmax of slope
            real m = (a + b) / 2;
            real d = -r_ / (m * m) + std::exp(m) * lq_;
            (d > 0 ? a : b) = m;
        }
        real top = a;
        if (slope(top) <= 0) return 2;
        if (slope(umax) > 0) throw domain_error("flat extension index too large for " + describe());
        a = top, b = umax;
        for (int i = 0; i < 200; ++i) {
            real m = (a + b) / 2;
            (slope(m) > 0 ? a : b) = m;
        }
        return finish(b, 2);
    }
    static index_t finish(real u, index_t lo) {
        real x = std::ceil(std::exp(u));
        if (!(x < 1.8e19L)) throw domain_error("flat extension index too large");
        return std::max<index_t>(lo, static_cast<index_t>(x));
    }

    mpq_class c_;
    double p_, r_;
    std::optional<mpq_class> q_;
    real lc_ = 0, lq_ = 0;
    index_t n0_ = 1;
    real ln0_ = 0;
};

// ---------------------------------------------------------------------------

/// Finitely supported sequence given by exact rational values (zero afterwards).
class FinitePrefixNode final : public SeqNode {
public:
    explicit FinitePrefixNode(std::vector<mpq_class> values, std::string label = "prefix")
        : values_(std::move(values)), label_(std::move(label)) {
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (sgn(values_[i]) < 0)
                throw domain_error("negative entry at index " + std::to_string(i + 1));
            if (i > 0 && values_[i] > values_[i - 1])
                throw domain_error("entries not nonincreasing at index " + std::to_string(i + 1));
        }
        while (!values_.empty() && sgn(values_.back()) == 0) values_.pop_back();
        suffix_.assign(values_.size() + 1, mpq_class(0));
        for (std::size_t i = values_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + values_[i];
        logs_.reserve(values_.size());
        for (auto& v : values_) logs_.push_back(log_of(v));
    }

    real log_value(index_t n) const override { return n <= logs_.size() ? logs_[n - 1] : neg_inf; }
    std::optional<mpq_class> exact_value(index_t n) const override {
        return n <= values_.size() ? values_[n - 1] : mpq_class(0);
    }
    Summable summable() const override { return Summable::yes; }
    Summable lorentz(int) const override { return Summable::yes; }
    std::optional<mpq_class> exact_tail(index_t n) const override {
        return n < suffix_.size() ? suffix_[n] : mpq_class(0);
    }
    std::optional<LogInterval> remainder(index_t N) const override {
        real l = log_of(*exact_tail(N));
        return LogInterval{l, l};
    }
    std::optional<LogInterval> second_remainder(index_t N) const override {
        real acc = neg_inf;
        for (index_t j = N + 1; j < suffix_.size(); ++j)
            acc = log_add(acc, log_of(suffix_[j]) - std::log(static_cast<real>(j)));
        return LogInterval{acc, acc};
    }
    std::optional<index_t> support_end() const override { return values_.size(); }
    std::string describe() const override { return label_ + "[" + std::to_string(values_.size()) + "]"; }

    const std::vector<mpq_class>& values() const { return values_; }

private:
    std::vector<mpq_class> values_;
    std::vector<mpq_class> suffix_;
    std::vector<real> logs_;
    std::string label_;
};

// ---------------------------------------------------------------------------

/**
 * Rule for a piecewise-constant sequence: ξ_n = ε_k for n_{k-1} < n <= n_k, n_0 = 0.
 */
struct PwRule {
    std::string name;
    std::function<mpz_class(int)> breakpoint;  // n_k, k >= 1
    std::function<mpq_class(int)> value;       // ε_k
    std::optional<int> last_block;             // finite support ends at n_last
    Summable summable = Summable::unknown;
    std::function<Summable(int)> lorentz;  // Σ ξ ln^m n < ∞
    /// ln of an upper bound for Σ_{k>K} ε_k (n_k - n_{k-1}).
    std::function<real(int)> log_mass_after;
    /// ln of an upper bound for Σ_{k>K} Σ_{i in block k} ξ_i (1 + ln i).
    std::function<real(int)> log_weighted_mass_after;
};

class PiecewiseNode final : public KeyedNode {
public:
    static constexpr real max_log_breakpoint = 5000;

    explicit PiecewiseNode(PwRule rule) : rule_(std::move(rule)) {
        mpz_class prev(0);
        mpq_class prev_eps;
        const mpz_class u64max = to_mpz(std::numeric_limits<index_t>::max());
        for (int k = 1;; ++k) {
            if (rule_.last_block && k > *rule_.last_block) break;
            Block b;
            b.n = rule_.breakpoint(k);
            b.eps = rule_.value(k);
            if (b.n <= prev)
                throw domain_error(rule_.name + ": breakpoints must strictly increase (k=" + std::to_string(k) + ")");
            if (sgn(b.eps) <= 0 || (k > 1 && b.eps >= prev_eps))
                throw domain_error(rule_.name + ": values must be positive and strictly decrease (k=" +
                                   std::to_string(k) + ")");
            b.n_u64 = b.n > u64max ? std::numeric_limits<index_t>::max() : mpz_get_ui(b.n.get_mpz_t());
            b.log_n = log_of(b.n);
            b.log_eps = log_of(b.eps);
            b.log_mass = b.log_eps + log_of(mpz_class(b.n - prev));
            blocks_.push_back(std::move(b));
            prev = blocks_.back().n;
            prev_eps = blocks_.back().eps;
            if (!rule_.last_block && (blocks_.back().log_n > max_log_breakpoint || k >= 4000)) break;
        }
        int K = static_cast<int>(blocks_.size());
        suffix_lo_.assign(K + 1, neg_inf);
        for (int k = K; k-- > 0;) suffix_lo_[k] = log_add(suffix_lo_[k + 1], blocks_[k].log_mass);
        real slack = rule_.last_block ? neg_inf : rule_.log_mass_after(K);
        weighted_slack_ = rule_.last_block ? neg_inf : rule_.log_weighted_mass_after(K);
        suffix_hi_.resize(K + 1);
        for (int k = 0; k <= K; ++k) suffix_hi_[k] = log_add(suffix_lo_[k], slack);
        if (rule_.last_block) {
            exact_suffix_.assign(K + 1, mpq_class(0));
            for (int k = K; k-- > 0;) {
                mpz_class prev_n = k == 0 ? mpz_class(0) : blocks_[k - 1].n;
                exact_suffix_[k] = exact_suffix_[k + 1] + blocks_[k].eps * mpq_class(blocks_[k].n - prev_n);
            }
        }
    }

    /// Block index (0-based) containing n, or -1 past a finite support.
    int block_of(index_t n) const {
        auto it = std::lower_bound(blocks_.begin(), blocks_.end(), n,
                                   [](const Block& b, index_t v) { return b.n_u64 < v; });
        if (it == blocks_.end()) {
            if (rule_.last_block) return -1;
            throw domain_error(rule_.name + ": index beyond cached blocks");
        }
        return static_cast<int>(it - blocks_.begin());
    }

    real log_value(index_t n) const override {
        int k = block_of(n);
        return k < 0 ? neg_inf : blocks_[k].log_eps;
    }
    std::optional<mpq_class> exact_value(index_t n) const override {
        int k = block_of(n);
        return k < 0 ? mpq_class(0) : blocks_[k].eps;
    }
    Summable lorentz(int m) const override {
        if (rule_.last_block) return Summable::yes;
        return rule_.lorentz ? rule_.lorentz(m) : (m == 0 ? rule_.summable : Summable::unknown);
    }
    Summable summable() const override { return rule_.last_block ? Summable::yes : rule_.summable; }
    std::optional<mpq_class> exact_tail(index_t n) const override {
        if (!rule_.last_block) return std::nullopt;
        int k = block_of(n);
        if (k < 0) return mpq_class(0);
        return blocks_[k].eps * mpq_class(blocks_[k].n - to_mpz(n)) + exact_suffix_[k + 1];
    }
    std::optional<LogInterval> remainder(index_t N) const override {
        if (summable() != Summable::yes) return std::nullopt;
        int k = block_of(N);
        if (k < 0) return LogInterval{neg_inf, neg_inf};
        real head = blocks_[k].log_eps + log_of(mpz_class(blocks_[k].n - to_mpz(N)));
        return LogInterval{log_add(head, suffix_lo_[k + 1]), log_add(head, suffix_hi_[k + 1])};
    }
    std::optional<LogInterval> second_remainder(index_t N) const override {
        if (lorentz(1) != Summable::yes) return std::nullopt;
        int k0 = block_of(N);
        if (k0 < 0) return LogInterval{neg_inf, neg_inf};
        real lo = neg_inf, hi = neg_inf;
        for (std::size_t k = static_cast<std::size_t>(k0); k < blocks_.size(); ++k) {
            real a = k == static_cast<std::size_t>(k0) ? static_cast<real>(N) + 1 : as_real(blocks_[k - 1]) + 1;
            real b = as_real(blocks_[k]);
            if (b < a) continue;
            // Σ_{j=a}^{b} (ε(n_k - j) + R)/j = (ε n_k + R)(H_b - H_{a-1}) - ε(b - a + 1)
            real eps = std::exp(blocks_[k].log_eps);
            real hdiff = harmonic_diff(a - 1, b);
            auto piece = [&](real logR) {
                real R = logR == neg_inf ? 0 : std::exp(logR);
                real v = (eps * b + R) * hdiff - eps * (b - a + 1);
                return v > 0 ? std::log(v) : neg_inf;
            };
            lo = log_add(lo, piece(suffix_lo_[k + 1]));
            hi = log_add(hi, piece(suffix_hi_[k + 1]));
        }
        hi = log_add(hi, weighted_slack_);
        return LogInterval{lo + std::log1p(-1e-12L), hi + std::log1p(1e-12L)};
    }
    std::optional<real> log_value_at_log_index(real L) const override {
        auto it = std::lower_bound(blocks_.begin(), blocks_.end(), L,
                                   [](const Block& b, real v) { return b.log_n < v; });
        if (it == blocks_.end()) return rule_.last_block ? std::optional<real>(neg_inf) : std::nullopt;
        return it->log_eps;
    }
    std::optional<index_t> support_end() const override {
        if (!rule_.last_block) return std::nullopt;
        return blocks_.back().n_u64;
    }
    std::string describe() const override { return "pw(" + rule_.name + ")"; }

    const PwRule& rule() const { return rule_; }
    std::size_t cached_blocks() const { return blocks_.size(); }
    const mpz_class& breakpoint(int k) const { return blocks_.at(k - 1).n; }
    const mpq_class& block_value(int k) const { return blocks_.at(k - 1).eps; }

    /// H_b - H_a for reals a < b (a >= 0).
    static real harmonic_diff(real a, real b) {
        if (b - a < 64 && b < 1e15L) {
            real s = 0;
            for (real j = a + 1; j <= b; j += 1) s += 1 / j;
            return s;
        }
        auto H = [](real x) -> std::pair<real, real> {  // (ln-free part, ln x)
            if (x < 20) {
                real s = 0;
                for (real j = 1; j <= x; j += 1) s += 1 / j;
                return {s, 0};
            }
            real x2 = x * x;
            return {0.5772156649015328606065120900824024L + 1 / (2 * x) - 1 / (12 * x2) + 1 / (120 * x2 * x2),
                    std::log(x)};
        };
        auto [ha, la] = H(a);
        auto [hb, lb] = H(b);
        real logpart;
        if (la != 0 && lb != 0) logpart = std::log1p((b - a) / a);
        else logpart = lb - la;
        return hb - ha + logpart;
    }

private:
    struct Block {
        mpz_class n;
        mpq_class eps;
        index_t n_u64 = 0;
        real log_n = 0, log_eps = 0, log_mass = 0;
    };
    static real as_real(const Block& b) {
        return b.n_u64 != std::numeric_limits<index_t>::max() ? static_cast<real>(b.n_u64) : std::exp(b.log_n);
    }
    PwRule rule_;
    std::vector<Block> blocks_;
    std::vector<real> suffix_lo_, suffix_hi_;
    std::vector<mpq_class> exact_suffix_;
    real weighted_slack_ = neg_inf;
};

// ---------------------------------------------------------------------------

class ScaleNode final : public KeyedNode {
public:
    ScaleNode(mpq_class c, Sequence child) : c_(std::move(c)), child_(std::move(child)) {
        if (sgn(c_) <= 0) throw domain_error("scale factor must be positive");
        lc_ = log_of(c_);
    }
    real log_value(index_t n) const override { return child_.log_value(n) + lc_; }
    std::optional<mpq_class> exact_value(index_t n) const override {
        auto v = child_.exact(n);
        if (!v) return std::nullopt;
        return mpq_class(*v * c_);
    }
    std::optional<mpq_class> exact_tail(index_t n) const override {
        auto v = child_.node().exact_tail(n);
        if (!v) return std::nullopt;
        return mpq_class(*v * c_);
    }
    std::optional<LogInterval> remainder(index_t N) const override { return shift(child_.node().remainder(N)); }
    std::optional<LogInterval> second_remainder(index_t N) const override {
        return shift(child_.node().second_remainder(N));
    }
    std::optional<real> log_envelope(real L) const override {
        auto v = child_.node().log_envelope(L);
        if (!v) return std::nullopt;
        return *v + lc_;
    }
    std::optional<real> log_envelope_x(real L) const override {
        auto v = child_.node().log_envelope_x(L);
        if (!v) return std::nullopt;
        return *v + lc_;
    }
    index_t envelope_start() const override { return child_.node().envelope_start(); }
    std::optional<real> log_value_at_log_index(real L) const override {
        auto v = child_.node().log_value_at_log_index(L);
        if (!v) return std::nullopt;
        return *v + lc_;
    }
    bool random_access() const override { return child_.node().random_access(); }
    std::optional<index_t> support_end() const override { return child_.support_end(); }
    std::optional<AsymKey> asym_key() const override { return key_of(child_); }
    std::string describe() const override { return "scale(" + c_.get_str() + ", " + child_.describe() + ")"; }

protected:
    Summable fallback_lorentz(int m) const override { return child_.lorentz(m); }

private:
    std::optional<LogInterval> shift(std::optional<LogInterval> r) const {
        if (!r) return r;
        return LogInterval{r->lo + lc_, r->hi + lc_};
    }
    mpq_class c_;
    Sequence child_;
    real lc_;
};

/// Sum, min, max or product of sequences.
class CombineNode final : public KeyedNode {
public:
    enum class Op { sum, min, max, product };

    CombineNode(Op op, std::vector<Sequence> children) : op_(op), children_(std::move(children)) {
        if (children_.empty()) throw domain_error("combination needs at least one operand");
    }

    real log_value(index_t n) const override {
        real acc = op_ == Op::sum ? neg_inf : op_ == Op::product ? 0 : children_[0].log_value(n);
        for (std::size_t i = 0; i < children_.size(); ++i) {
            if (op_ != Op::sum && op_ != Op::product && i == 0) continue;
            acc = fold(acc, children_[i].log_value(n));
        }
        return acc;
    }
    std::optional<mpq_class> exact_value(index_t n) const override {
        std::optional<mpq_class> acc;
        for (auto& c : children_) {
            auto v = c.exact(n);
            if (!v) return std::nullopt;
            if (!acc) acc = *v;
            else if (op_ == Op::sum) *acc += *v;
            else if (op_ == Op::product) *acc *= *v;
            else if (op_ == Op::min) acc = std::min(*acc, *v);
            else acc = std::max(*acc, *v);
        }
        return acc;
    }
    std::optional<mpq_class> exact_tail(index_t n) const override {
        if (op_ != Op::sum) return std::nullopt;
        mpq_class acc(0);
        for (auto& c : children_) {
            auto v = c.node().exact_tail(n);
            if (!v) return std::nullopt;
            acc += *v;
        }
        return acc;
    }
    std::optional<LogInterval> remainder(index_t N) const override {
        if (has_envelope()) return envelope_remainder(*this, N);
        std::vector<LogInterval> rs;
        for (auto& c : children_) {
            auto r = c.node().remainder(N);
            if (!r) {
                if (op_ == Op::min || op_ == Op::product) continue;
                return std::nullopt;
            }
            rs.push_back(*r);
        }
        if (rs.empty()) return std::nullopt;
        LogInterval out;
        switch (op_) {
            case Op::sum:
                for (auto& r : rs) out = {log_add(out.lo, r.lo), log_add(out.hi, r.hi)};
                return out;
            case Op::max:
                out = {neg_inf, neg_inf};
                for (auto& r : rs) out = {std::max(out.lo, r.lo), log_add(out.hi, r.hi)};
                return out;
            case Op::min:
                out = {neg_inf, pos_inf};
                for (auto& r : rs) out.hi = std::min(out.hi, r.hi);
                return out;
            case Op::product: {
                // Σ Π a_j <= (Π_{others} a_{N+1}) · T_i(N) for any factor i with a remainder.
                real best = pos_inf;
                for (std::size_t i = 0; i < children_.size(); ++i) {
                    auto r = children_[i].node().remainder(N);
                    if (!r) continue;
                    real v = r->hi;
                    for (std::size_t j = 0; j < children_.size(); ++j)
                        if (j != i) v += children_[j].log_value(N + 1);
                    best = std::min(best, v);
                }
                return LogInterval{neg_inf, best};
            }
        }
        return std::nullopt;
    }
    std::optional<LogInterval> second_remainder(index_t N) const override {
        if (has_envelope()) return envelope_second_remainder(*this, N);
        if (op_ != Op::sum) return std::nullopt;
        LogInterval out;
        for (auto& c : children_) {
            auto r = c.node().second_remainder(N);
            if (!r) return std::nullopt;
            out = {log_add(out.lo, r->lo), log_add(out.hi, r->hi)};
        }
        return out;
    }
    std::optional<real> log_envelope(real L) const override {
        if (!has_envelope()) return std::nullopt;
        std::optional<real> acc;
        for (auto& c : children_) {
            auto v = c.node().log_envelope(L);
            if (!v) return std::nullopt;
            acc = acc ? fold(*acc, *v) : *v;
        }
        return acc;
    }
    std::optional<real> log_envelope_x(real L) const override {
        if (!has_envelope()) return std::nullopt;
        std::optional<real> acc;
        for (std::size_t i = 0; i < children_.size(); ++i) {
            auto& n = children_[i].node();
            auto v = (op_ == Op::product && i > 0) ? n.log_envelope(L) : n.log_envelope_x(L);
            if (!v) return std::nullopt;
            acc = acc ? fold(*acc, *v) : *v;
        }
        return acc;
    }
    index_t envelope_start() const override {
        index_t s = 0;
        for (auto& c : children_) {
            index_t cs = c.node().envelope_start();
            if (cs == 0) return 0;
            s = std::max(s, cs);
        }
        return s;
    }
    std::optional<real> log_value_at_log_index(real L) const override {
        std::optional<real> acc;
        for (auto& c : children_) {
            auto v = c.node().log_value_at_log_index(L);
            if (!v) return std::nullopt;
            acc = acc ? fold(*acc, *v) : *v;
        }
        return acc;
    }
    bool random_access() const override {
        for (auto& c : children_)
            if (!c.node().random_access()) return false;
        return true;
    }
    std::optional<index_t> support_end() const override {
        std::optional<index_t> out;
        for (auto& c : children_) {
            auto s = c.support_end();
            if (op_ == Op::min || op_ == Op::product) {
                if (s) out = out ? std::min(*out, *s) : *s;
            } else {
                if (!s) return std::nullopt;
                out = out ? std::max(*out, *s) : *s;
            }
        }
        return out;
    }
    std::optional<AsymKey> asym_key() const override {
        std::optional<AsymKey> acc;
        for (auto& c : children_) {
            auto k = key_of(c);
            if (!k) return std::nullopt;
            if (!acc) {
                acc = k;
                continue;
            }
            switch (op_) {
                case Op::product: acc = AsymKey{acc->log_q + k->log_q, acc->p + k->p, acc->r + k->r}; break;
                case Op::min:
                    if (eventually_smaller(*k, *acc)) acc = k;
                    break;
                case Op::sum:
                case Op::max:
                    if (eventually_smaller(*acc, *k)) acc = k;
                    break;
            }
        }
        return acc;
    }
    std::string describe() const override {
        static const char* names[] = {"sum", "min", "max", "product"};
        std::string s = names[static_cast<int>(op_)];
        s += "(";
        for (std::size_t i = 0; i < children_.size(); ++i) s += (i ? ", " : "") + children_[i].describe();
        return s + ")";
    }

protected:
    Summable fallback_lorentz(int m) const override {
        bool any_yes = false, all_yes = true, any_no = false;
        for (auto& c : children_) {
            Summable s = c.lorentz(m);
            any_yes |= s == Summable::yes;
            all_yes &= s == Summable::yes;
            any_no |= s == Summable::no;
        }
        switch (op_) {
            case Op::sum:
            case Op::max:
                if (all_yes) return Summable::yes;
                if (any_no) return Summable::no;
                return Summable::unknown;
            case Op::min:
            case Op::product:
                // Every operand is bounded and nonincreasing, so one summable operand suffices.
                return any_yes ? Summable::yes : Summable::unknown;
        }
        return Summable::unknown;
    }

private:
    bool has_envelope() const { return envelope_start() != 0; }
    real fold(real a, real b) const {
        switch (op_) {
            case Op::sum: return log_add(a, b);
            case Op::min: return std::min(a, b);
            case Op::max: return std::max(a, b);
            case Op::product: return a + b;
        }
        return a;
    }
    Op op_;
    std::vector<Sequence> children_;
};

/// Ampliation D_m: each entry repeated m times.
class AmpliationNode final : public KeyedNode {
public:
    AmpliationNode(index_t m, Sequence child) : m_(m), child_(std::move(child)) {
        if (m_ == 0) throw domain_error("ampliation factor must be >= 1");
    }
    index_t parent(index_t n) const { return (n + m_ - 1) / m_; }
    real log_value(index_t n) const override { return child_.log_value(parent(n)); }
    std::optional<mpq_class> exact_value(index_t n) const override { return child_.exact(parent(n)); }
    std::optional<mpq_class> exact_tail(index_t n) const override {
        index_t t = parent(n);
        if (t == 0) t = 0;
        auto ct = child_.node().exact_tail(t);
        if (!ct) return std::nullopt;
        mpq_class head(0);
        if (m_ * t > n) head = mpq_class(to_mpz(m_ * t - n)) * child_.exact_or_throw(t);
        return mpq_class(head + mpq_class(to_mpz(m_)) * *ct);
    }
    std::optional<LogInterval> remainder(index_t N) const override {
        index_t t = parent(N);
        if (t == 0) return std::nullopt;
        auto r = child_.node().remainder(t);
        if (!r) return std::nullopt;
        real lm = std::log(static_cast<real>(m_));
        real head = m_ * t > N ? std::log(static_cast<real>(m_ * t - N)) + child_.log_value(t) : neg_inf;
        return LogInterval{log_add(head, r->lo + lm), log_add(head, r->hi + lm)};
    }
    std::optional<LogInterval> second_remainder(index_t) const override { return std::nullopt; }
    std::optional<real> log_value_at_log_index(real L) const override {
        return child_.node().log_value_at_log_index(std::max<real>(0, L - std::log(static_cast<real>(m_))));
    }
    bool random_access() const override { return child_.node().random_access(); }
    std::optional<index_t> support_end() const override {
        auto s = child_.support_end();
        if (!s) return s;
        return *s * m_;
    }
    std::optional<AsymKey> asym_key() const override {
        auto k = key_of(child_);
        if (!k) return k;
        k->log_q /= static_cast<real>(m_);
        return k;
    }
    std::string describe() const override { return "D" + std::to_string(m_) + "(" + child_.describe() + ")"; }

protected:
    Summable fallback_lorentz(int m) const override { return child_.lorentz(m); }

private:
    index_t m_;
    Sequence child_;
};

/// Dilution D_{1/m}: j -> ξ_{mj}.
class DilutionNode final : public KeyedNode {
public:
    DilutionNode(index_t m, Sequence child) : m_(m), child_(std::move(child)) {
        if (m_ == 0) throw domain_error("dilution factor must be >= 1");
        lm_ = std::log(static_cast<real>(m_));
    }
    real log_value(index_t n) const override { return child_.log_value(n * m_); }
    std::optional<mpq_class> exact_value(index_t n) const override { return child_.exact(n * m_); }
    std::optional<LogInterval> remainder(index_t N) const override {
        if (envelope_start() != 0) return envelope_remainder(*this, N);
        // m·Σ_{j>N} ξ_{mj} lies between T(m(N+1)-1) and T(mN).
        auto lo = child_.node().remainder(m_ * (N + 1) - 1);
        auto hi = child_.node().remainder(m_ * N);
        if (!lo || !hi) return std::nullopt;
        return LogInterval{lo->lo - lm_, hi->hi - lm_};
    }
    std::optional<real> log_envelope(real L) const override { return child_.node().log_envelope(L + lm_); }
    std::optional<real> log_envelope_x(real L) const override {
        auto v = child_.node().log_envelope_x(L + lm_);
        if (!v) return v;
        return *v - lm_;
    }
    index_t envelope_start() const override {
        index_t s = child_.node().envelope_start();
        if (s == 0) return 0;
        return std::max<index_t>(1, (s + m_ - 1) / m_);
    }
    std::optional<real> log_value_at_log_index(real L) const override {
        return child_.node().log_value_at_log_index(L + lm_);
    }
    bool random_access() const override { return child_.node().random_access(); }
    std::optional<index_t> support_end() const override {
        auto s = child_.support_end();
        if (!s) return s;
        return *s / m_;
    }
    std::optional<AsymKey> asym_key() const override {
        auto k = key_of(child_);
        if (!k) return k;
        k->log_q *= static_cast<real>(m_);
        return k;
    }
    std::string describe() const override { return "Dinv" + std::to_string(m_) + "(" + child_.describe() + ")"; }

protected:
    Summable fallback_lorentz(int m) const override { return child_.lorentz(m); }

private:
    index_t m_;
    Sequence child_;
    real lm_;
};

/// Exact prefix values followed by a child sequence.
class PrefixOverrideNode final : public KeyedNode {
public:
    PrefixOverrideNode(std::vector<mpq_class> values, Sequence child)
        : values_(std::move(values)), child_(std::move(child)) {
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (sgn(values_[i]) < 0) throw domain_error("negative override entry");
            if (i > 0 && values_[i] > values_[i - 1]) throw domain_error("override entries not nonincreasing");
            logs_.push_back(log_of(values_[i]));
        }
        if (!values_.empty() && child_.log_value(values_.size() + 1) > logs_.back() + 1e-15L)
            throw domain_error("override breaks monotonicity at the junction");
        partial_ = mpq_class(0);
    }
    real log_value(index_t n) const override { return n <= values_.size() ? logs_[n - 1] : child_.log_value(n); }
    std::optional<mpq_class> exact_value(index_t n) const override {
        if (n <= values_.size()) return values_[n - 1];
        return child_.exact(n);
    }
    std::optional<mpq_class> exact_tail(index_t n) const override {
        index_t len = values_.size();
        auto ct = child_.node().exact_tail(std::max<index_t>(n, len));
        if (!ct) return std::nullopt;
        mpq_class s = *ct;
        for (index_t j = n + 1; j <= len; ++j) s += values_[j - 1];
        return s;
    }
    std::optional<LogInterval> remainder(index_t N) const override {
        if (N < values_.size()) return std::nullopt;
        return child_.node().remainder(N);
    }
    std::optional<LogInterval> second_remainder(index_t N) const override {
        if (N < values_.size()) return std::nullopt;
        return child_.node().second_remainder(N);
    }
    std::optional<real> log_envelope(real L) const override { return child_.node().log_envelope(L); }
    std::optional<real> log_envelope_x(real L) const override { return child_.node().log_envelope_x(L); }
    index_t envelope_start() const override {
        index_t s = child_.node().envelope_start();
        return s == 0 ? 0 : std::max<index_t>(s, values_.size() + 1);
    }
    std::optional<real> log_value_at_log_index(real L) const override {
        if (std::exp(L) <= static_cast<real>(values_.size())) return std::nullopt;
        return child_.node().log_value_at_log_index(L);
    }
    bool random_access() const override { return child_.node().random_access(); }
    std::optional<index_t> support_end() const override {
        auto s = child_.support_end();
        if (!s) return s;
        return std::max<index_t>(*s, values_.size());
    }
    std::optional<AsymKey> asym_key() const override { return key_of(child_); }
    std::string describe() const override {
        return "override[" + std::to_string(values_.size()) + "](" + child_.describe() + ")";
    }

protected:
    Summable fallback_lorentz(int m) const override { return child_.lorentz(m); }

private:
    std::vector<mpq_class> values_;
    std::vector<real> logs_;
    Sequence child_;
    mpq_class partial_;
};

/// Sequence defined by callbacks; used by constructions.
class FunctionNode final : public SeqNode {
public:
    struct Spec {
        std::string label;
        std::function<real(index_t)> log_value;
        std::function<std::optional<mpq_class>(index_t)> exact_value;
        Summable summable = Summable::unknown;
        std::function<Summable(int)> lorentz;
        std::function<std::optional<LogInterval>(index_t)> remainder;
        std::optional<index_t> support_end;
        bool random_access = true;
    };
    explicit FunctionNode(Spec s) : s_(std::move(s)) {}
    real log_value(index_t n) const override {
        if (s_.support_end && n > *s_.support_end) return neg_inf;
        return s_.log_value(n);
    }
    std::optional<mpq_class> exact_value(index_t n) const override {
        if (!s_.exact_value) return std::nullopt;
        if (s_.support_end && n > *s_.support_end) return mpq_class(0);
        return s_.exact_value(n);
    }
    Summable summable() const override { return s_.support_end ? Summable::yes : s_.summable; }
    Summable lorentz(int m) const override {
        if (s_.support_end) return Summable::yes;
        if (s_.lorentz) return s_.lorentz(m);
        return m == 0 ? s_.summable : Summable::unknown;
    }
    std::optional<LogInterval> remainder(index_t N) const override {
        if (s_.support_end && N >= *s_.support_end) return LogInterval{neg_inf, neg_inf};
        if (s_.remainder) return s_.remainder(N);
        return std::nullopt;
    }
    std::optional<LogInterval> second_remainder(index_t N) const override {
        if (s_.support_end && N >= *s_.support_end) return LogInterval{neg_inf, neg_inf};
        return std::nullopt;
    }
    bool random_access() const override { return s_.random_access; }
    std::optional<index_t> support_end() const override { return s_.support_end; }
    std::string describe() const override { return s_.label; }

private:
    Spec s_;
};

// Convenience factories.

inline Sequence omega_pow(double p) { return Sequence(std::make_shared<MonomialNode>(mpq_class(1), p, 0.0, std::nullopt)); }
inline Sequence omega() { return omega_pow(1.0); }
inline Sequence geom(const mpq_class& q) { return Sequence(std::make_shared<MonomialNode>(mpq_class(1), 0.0, 0.0, q)); }
inline Sequence monomial(const mpq_class& c, double p, double r, std::optional<mpq_class> q = std::nullopt) {
    return Sequence(std::make_shared<MonomialNode>(c, p, r, std::move(q)));
}
inline Sequence finite_sequence(std::vector<mpq_class> values, std::string label = "prefix") {
    return Sequence(std::make_shared<FinitePrefixNode>(std::move(values), std::move(label)));
}
inline Sequence scale(const mpq_class& c, Sequence s) { return Sequence(std::make_shared<ScaleNode>(c, std::move(s))); }
inline Sequence combine(CombineNode::Op op, std::vector<Sequence> xs) {
    if (xs.size() == 1) return xs[0];
    return Sequence(std::make_shared<CombineNode>(op, std::move(xs)));
}
inline Sequence piecewise(PwRule rule) { return Sequence(std::make_shared<PiecewiseNode>(std::move(rule))); }
inline Sequence prefix_override(std::vector<mpq_class> values, Sequence child) {
    return Sequence(std::make_shared<PrefixOverrideNode>(std::move(values), std::move(child)));
}
inline Sequence function_sequence(FunctionNode::Spec spec) { return Sequence(std::make_shared<FunctionNode>(std::move(spec))); }

}  // namespace amseq
