#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <unordered_map>

#include "ruledistill/errors.hpp"
#include "ruledistill/grammar.hpp"
#include "ruledistill/hypotheses.hpp"

namespace rd {

std::uint64_t count_enumerable_formulas(int n_features, int max_literals) {
    const std::uint64_t m = 2 * static_cast<std::uint64_t>(n_features);
    std::uint64_t total = 0, power = 1, splits = 1;
    for (int l = 1; l <= max_literals; ++l) {
        power *= m;
        total += power * splits;
        splits *= 2;
    }
    return total;
}

namespace {

std::vector<FeatureLiteral> literal_choices(int n_features) {
    std::vector<FeatureLiteral> out;
    for (int i = 1; i <= n_features; ++i) {
        out.push_back({i, true});
        out.push_back({i, false});
    }
    return out;
}

class FormulaEnumerator {
public:
    FormulaEnumerator(int n_features, int max_literals, std::vector<Formula>& out)
        : lits_(literal_choices(n_features)), max_literals_(max_literals), out_(out) {}

    void run() {
        Formula f;
        for (const auto& l : lits_) {
            f.conjunctions.push_back(Conjunction{{l}});
            in_conjunction(f, 1);
            f.conjunctions.pop_back();
        }
    }

private:
    void in_conjunction(Formula& f, int used) {
        after_conjunction(f, used);
        if (used == max_literals_) return;
        auto& lits = f.conjunctions.back().literals;
        for (const auto& l : lits_) {
            lits.push_back(l);
            in_conjunction(f, used + 1);
            lits.pop_back();
        }
    }

    void after_conjunction(Formula& f, int used) {
        out_.push_back(f);
        if (used == max_literals_) return;
        for (const auto& l : lits_) {
            f.conjunctions.push_back(Conjunction{{l}});
            in_conjunction(f, used + 1);
            f.conjunctions.pop_back();
        }
    }

    std::vector<FeatureLiteral> lits_;
    int max_literals_;
    std::vector<Formula>& out_;
};

/// log B(c + alpha) - log B(alpha) for count vectors, with lgamma tables.
class BetaTable {
public:
    BetaTable(double alpha, int max_count) : alpha_(alpha) {
        lg_.resize(static_cast<std::size_t>(max_count) + 1);
        for (int c = 0; c <= max_count; ++c) lg_[static_cast<std::size_t>(c)] = std::lgamma(c + alpha) - std::lgamma(alpha);
    }

    template <class It>
    double log_ratio(It begin, It end) const {
        double lg = 0.0;
        int total = 0;
        std::size_t dim = 0;
        for (auto it = begin; it != end; ++it, ++dim) {
            lg += lg_[static_cast<std::size_t>(*it)];
            total += *it;
        }
        const double a = alpha_ * static_cast<double>(dim);
        return lg - std::lgamma(total + a) + std::lgamma(a);
    }

private:
    double alpha_;
    std::vector<double> lg_;
};

class MassEnumerator {
public:
    MassEnumerator(int n_features, double alpha, int max_literals)
        : n_(n_features), max_literals_(max_literals), beta_(alpha, max_literals + 1) {
        for (int i = 0; i < n_; ++i) {
            for (int v = 1; v >= 0; --v) {
                std::uint64_t t = 0;
                for (std::uint32_t o = 0; o < (1u << n_); ++o)
                    if (static_cast<int>((o >> (n_ - 1 - i)) & 1u) == v) t |= std::uint64_t{1} << o;
                lit_tables_.push_back(t);
            }
        }
        if (n_ <= 4) dense_.assign(std::size_t{1} << (1u << n_), 0.0);
    }

    HypothesisTable run() {
        for (std::size_t l = 0; l < lit_tables_.size(); ++l) {
            ++counts_[l];
            in_conjunction(1, 1, 0, lit_tables_[l]);
            --counts_[l];
        }
        HypothesisTable out;
        out.n_features = n_;
        out.formula_count = formula_count_;
        if (!dense_.empty()) {
            for (std::size_t t = 0; t < dense_.size(); ++t) {
                if (dense_[t] == 0.0) continue;
                out.tables.push_back(t);
                out.mass.push_back(dense_[t]);
            }
        } else {
            std::map<std::uint64_t, double> sorted(sparse_.begin(), sparse_.end());
            for (const auto& [t, m] : sorted) {
                out.tables.push_back(t);
                out.mass.push_back(m);
            }
        }
        for (double m : out.mass) out.total_mass += m;
        return out;
    }

private:
    void in_conjunction(int used, int k, std::uint64_t done, std::uint64_t cur) {
        after_conjunction(used, k, done | cur);
        if (used == max_literals_) return;
        for (std::size_t l = 0; l < lit_tables_.size(); ++l) {
            ++counts_[l];
            in_conjunction(used + 1, k, done, cur & lit_tables_[l]);
            --counts_[l];
        }
    }

    void after_conjunction(int used, int k, std::uint64_t table) {
        emit(used, k, table);
        if (used == max_literals_) return;
        for (std::size_t l = 0; l < lit_tables_.size(); ++l) {
            ++counts_[l];
            in_conjunction(used + 1, k + 1, table, lit_tables_[l]);
            --counts_[l];
        }
    }

    void emit(int literals, int k, std::uint64_t table) {
        const std::array<int, 2> d{k - 1, 1};
        const std::array<int, 2> c{literals - 1, k};
        double lp = beta_.log_ratio(d.begin(), d.end()) + beta_.log_ratio(c.begin(), c.end());
        std::array<int, kMaxFeatures> per_feature{};
        for (int i = 0; i < n_; ++i) {
            const auto i2 = static_cast<std::size_t>(2 * i);
            per_feature[static_cast<std::size_t>(i)] = counts_[i2] + counts_[i2 + 1];
            if (per_feature[static_cast<std::size_t>(i)] > 0) lp += beta_.log_ratio(&counts_[i2], &counts_[i2] + 2);
        }
        if (n_ > 1) lp += beta_.log_ratio(per_feature.begin(), per_feature.begin() + n_);
        const double m = std::exp(lp);
        if (!dense_.empty())
            dense_[table] += m;
        else
            sparse_[table] += m;
        ++formula_count_;
    }

    int n_;
    int max_literals_;
    BetaTable beta_;
    std::vector<std::uint64_t> lit_tables_;
    std::array<int, 2 * kMaxFeatures> counts_{};
    std::vector<double> dense_;
    std::unordered_map<std::uint64_t, double> sparse_;
    std::uint64_t formula_count_ = 0;
};

} // namespace

std::vector<Formula> enumerate_formulas(const Grammar& grammar, int max_literals, std::size_t budget) {
    if (max_literals < 1) throw InvalidArgument("enumerate_formulas: max_literals must be at least 1");
    const auto expected = count_enumerable_formulas(grammar.n_features(), max_literals);
    if (expected > budget)
        throw ResourceError("enumerate_formulas: " + std::to_string(expected) + " formulas exceed budget " +
                            std::to_string(budget));
    std::vector<Formula> out;
    out.reserve(static_cast<std::size_t>(expected));
    FormulaEnumerator(grammar.n_features(), max_literals, out).run();
    return out;
}

HypothesisTable enumerate_hypotheses(const Grammar& grammar, double dirichlet_alpha, int max_literals) {
    if (max_literals < 1) throw InvalidArgument("enumerate_hypotheses: max_literals must be at least 1");
    if (!(dirichlet_alpha > 0.0)) throw InvalidArgument("dirichlet_alpha must be positive");
    // 8^8 * 2^7 leaves is already several minutes of work
    if (count_enumerable_formulas(grammar.n_features(), max_literals) > (std::uint64_t{1} << 34))
        throw ResourceError("enumerate_hypotheses: hypothesis space too large for enumeration");
    return MassEnumerator(grammar.n_features(), dirichlet_alpha, max_literals).run();
}

const HypothesisTable& cached_hypotheses(const Grammar& grammar, double dirichlet_alpha, int max_literals) {
    using Key = std::tuple<int, double, int>;
    static std::mutex mu;
    static std::map<Key, std::unique_ptr<HypothesisTable>> cache;
    const Key key{grammar.n_features(), dirichlet_alpha, max_literals};
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<HypothesisTable>(
                                    enumerate_hypotheses(grammar, dirichlet_alpha, max_literals)))
                 .first;
    return *it->second;
}

} // namespace rd
