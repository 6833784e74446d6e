#pragma once

/**
 * @file transforms.hpp
 * @brief Arithmetic mean, arithmetic mean at infinity and the elementary sequence transforms.
 */

#include "nodes.hpp"

#include <numeric>

namespace amseq {

inline constexpr index_t table_cap = index_t{1} << 22;

/// ξ_a with (ξ_a)_n = (1/n) Σ_{j<=n} ξ_j.
class ArithmeticMeanNode final : public SeqNode {
public:
    explicit ArithmeticMeanNode(Sequence child) : child_(std::move(child)) {}

    real log_value(index_t n) const override {
        if (n > table_cap) throw domain_error("arithmetic mean index beyond table cap");
        auto t = child_.prefix_table(n);
        return t->log_sum[n] - std::log(static_cast<real>(n));
    }
    std::optional<mpq_class> exact_value(index_t n) const override {
        if (n > 2000000) return std::nullopt;
        std::unique_lock lock(mu_);
        if (exact_sums_.empty()) exact_sums_.push_back(mpq_class(0));
        while (exact_sums_.size() <= n) {
            auto v = child_.exact(exact_sums_.size());
            if (!v) return std::nullopt;
            exact_sums_.push_back(exact_sums_.back() + *v);
        }
        return mpq_class(exact_sums_[n] / to_mpq(n));
    }
    Summable summable() const override { return child_.log_value(1) == neg_inf ? Summable::yes : Summable::no; }
    Summable lorentz(int) const override { return summable(); }
    std::optional<LogInterval> remainder(index_t) const override { return std::nullopt; }
    std::optional<LogInterval> second_remainder(index_t) const override { return std::nullopt; }
    bool random_access() const override { return false; }
    std::string describe() const override { return "am(" + child_.describe() + ")"; }

private:
    Sequence child_;
    mutable std::mutex mu_;
    mutable std::vector<mpq_class> exact_sums_;
};

/// ξ_{a∞} with (ξ_{a∞})_n = (1/n) Σ_{j>n} ξ_j.
class AmInfinityNode final : public SeqNode {
public:
    explicit AmInfinityNode(Sequence child) : child_(std::move(child)) {
        Summable s = child_.summable();
        if (s != Summable::yes)
            throw summability_error("am_infinity needs a summable sequence; " + child_.describe() +
                                    " has summable=" + to_string(s));
    }

    real log_value(index_t n) const override {
        real ln = std::log(static_cast<real>(n));
        if (n <= table_cap) {
            index_t want = std::max<index_t>(n, index_t{1} << 16);
            auto t = child_.tail_table(want);
            return t->log_tail[n] - ln;
        }
        TailSum t = child_.tail(n, 1e-12L);
        return (t.is_exact() ? t.log_lo : t.log_mid()) - ln;
    }
    std::optional<mpq_class> exact_value(index_t n) const override {
        auto t = child_.node().exact_tail(n);
        if (!t) return std::nullopt;
        return mpq_class(*t / to_mpq(n));
    }
    Summable summable() const override { return child_.lorentz(1); }
    Summable lorentz(int m) const override { return child_.lorentz(m + 1); }
    std::optional<mpq_class> exact_tail(index_t n) const override {
        auto s = child_.support_end();
        if (!s) return std::nullopt;
        mpq_class acc(0);
        for (index_t j = n + 1; j < *s; ++j) {
            auto t = child_.node().exact_tail(j);
            if (!t) return std::nullopt;
            acc += *t / to_mpq(j);
        }
        return acc;
    }
    std::optional<LogInterval> remainder(index_t N) const override { return child_.node().second_remainder(N); }
    std::optional<LogInterval> second_remainder(index_t) const override { return std::nullopt; }
    bool random_access() const override { return false; }
    std::optional<index_t> support_end() const override {
        auto s = child_.support_end();
        if (!s) return s;
        return *s == 0 ? 0 : *s - 1;
    }
    std::string describe() const override { return "am_inf(" + child_.describe() + ")"; }

    const Sequence& base() const { return child_; }

private:
    Sequence child_;
};

/// ξ_g with (ξ_g)_n = (ξ_1 ··· ξ_n)^{1/n}, accumulated in log space.
class GeometricMeanNode final : public SeqNode {
public:
    explicit GeometricMeanNode(Sequence child) : child_(std::move(child)) {}

    real log_value(index_t n) const override {
        if (n > table_cap) throw domain_error("geometric mean index beyond table cap");
        std::unique_lock lock(mu_);
        if (logsum_.empty()) logsum_.push_back(0);
        while (logsum_.size() <= n) {
            index_t j = logsum_.size();
            real l = child_.log_value(j);
            if (l == neg_inf) throw domain_error("geometric mean: zero entry at index " + std::to_string(j));
            logsum_.push_back(logsum_.back() + l);
        }
        return logsum_[n] / static_cast<real>(n);
    }
    Summable summable() const override { return child_.summable() == Summable::yes ? Summable::yes : Summable::unknown; }
    std::optional<LogInterval> remainder(index_t) const override { return std::nullopt; }
    std::optional<LogInterval> second_remainder(index_t) const override { return std::nullopt; }
    bool random_access() const override { return false; }
    std::string describe() const override { return "gm(" + child_.describe() + ")"; }

private:
    Sequence child_;
    mutable std::mutex mu_;
    mutable std::vector<real> logsum_;
};

inline Sequence arithmetic_mean(const Sequence& s) { return Sequence(std::make_shared<ArithmeticMeanNode>(s)); }

/// ξ_{a∞}. Tails are bracketed to relative width ~1e-13; tol is accepted for interface symmetry.
inline Sequence am_infinity(const Sequence& s, real /*tol*/ = 1e-12L) {
    return Sequence(std::make_shared<AmInfinityNode>(s));
}

inline Sequence ampliation(const Sequence& s, index_t m) {
    if (m == 0) throw domain_error("ampliation factor must be >= 1");
    if (m == 1) return s;
    return Sequence(std::make_shared<AmpliationNode>(m, s));
}

inline Sequence dilution(const Sequence& s, index_t m) {
    if (m == 0) throw domain_error("dilution factor must be >= 1");
    if (m == 1) return s;
    return Sequence(std::make_shared<DilutionNode>(m, s));
}

inline Sequence geometric_mean(const Sequence& s) { return Sequence(std::make_shared<GeometricMeanNode>(s)); }

inline TailSum tail_sum(const Sequence& s, index_t n, real rel_tol = 1e-10L) { return s.tail(n, rel_tol); }

/// Nonincreasing rearrangement (stable among ties), zero-padded.
inline Sequence monotonize(const std::vector<mpq_class>& raw) {
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (sgn(raw[i]) < 0) throw domain_error("monotonize: negative entry at index " + std::to_string(i + 1));
    std::vector<std::size_t> idx(raw.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return raw[a] > raw[b]; });
    std::vector<mpq_class> out;
    out.reserve(raw.size());
    for (auto i : idx) out.push_back(raw[i]);
    return finite_sequence(std::move(out), "monotonized");
}

/// Smallest nonincreasing majorant sup_{j>=n} γ_j of a finite list (zero afterwards).
inline std::vector<mpq_class> upper_envelope_values(const std::vector<mpq_class>& raw) {
    std::vector<mpq_class> out(raw.size());
    mpq_class run(0);
    for (std::size_t i = raw.size(); i-- > 0;) {
        if (sgn(raw[i]) < 0) throw domain_error("upper_envelope: negative entry at index " + std::to_string(i + 1));
        if (raw[i] > run) run = raw[i];
        out[i] = run;
    }
    return out;
}

inline Sequence upper_envelope(const std::vector<mpq_class>& raw) {
    return finite_sequence(upper_envelope_values(raw), "envelope");
}

/// Upper envelope of a sequence whose tail beyond `horizon` is known to be dominated by its
/// value at the horizon (e.g. a nonincreasing input); returns the log values for n <= horizon.
inline std::vector<real> upper_envelope_log(const std::function<real(index_t)>& raw_log, index_t horizon) {
    std::vector<real> out(horizon);
    real run = neg_inf;
    for (index_t n = horizon; n >= 1; --n) {
        run = std::max(run, raw_log(n));
        out[n - 1] = run;
    }
    return out;
}

}  // namespace amseq
