#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ruledistill/formula.hpp"
#include "ruledistill/rng.hpp"

namespace rd {

struct Production {
    std::string lhs;
    std::vector<std::string> rhs;

    std::string to_string() const;
};

struct Nonterminal {
    std::string name;
    std::vector<Production> productions;
};

/// The DNF concept grammar:
///
///   S     -> forall x  l(x) <=> D_top
///   D_top -> C_top or D
///   C_top -> P and C
///   D     -> C or D | False
///   C     -> P and C | True
///   P     -> F_1 | ... | F_n
///   F_i   -> f_i(x)=1 | f_i(x)=0
///
/// Nonterminals live at fixed indices (see the k* constants); the
/// production order above is the index order inside each nonterminal.
class Grammar {
public:
    static constexpr std::size_t kStart = 0;
    static constexpr std::size_t kDTop = 1;
    static constexpr std::size_t kCTop = 2;
    static constexpr std::size_t kD = 3;
    static constexpr std::size_t kC = 4;
    static constexpr std::size_t kP = 5;
    static constexpr std::size_t kFirstFeature = 6;

    // production indices inside D and C
    static constexpr std::size_t kRecurse = 0;
    static constexpr std::size_t kStop = 1;
    // production indices inside F_i
    static constexpr std::size_t kValueOne = 0;
    static constexpr std::size_t kValueZero = 1;

    int n_features() const noexcept { return n_features_; }
    const std::vector<Nonterminal>& nonterminals() const noexcept { return nonterminals_; }
    std::size_t feature_nonterminal(int feature) const { return kFirstFeature + static_cast<std::size_t>(feature - 1); }

    /// Checks that every nonterminal has a production and every right-hand
    /// side symbol is declared (a nonterminal or a terminal token).
    void validate() const;

    friend Grammar default_grammar(int n_features);

private:
    int n_features_ = 0;
    std::vector<Nonterminal> nonterminals_;
};

Grammar default_grammar(int n_features);

/// Per-nonterminal production probability vectors.
class ProbTable {
public:
    ProbTable() = default;
    explicit ProbTable(std::vector<std::vector<double>> probs);

    const std::vector<std::vector<double>>& rows() const noexcept { return probs_; }
    const std::vector<double>& operator[](std::size_t nonterminal) const { return probs_.at(nonterminal); }

    /// Uniform probabilities over each nonterminal's productions.
    static ProbTable uniform(const Grammar& grammar);

    /// Throws InvalidArgument unless the table matches the grammar's shape.
    void check_compatible(const Grammar& grammar) const;

    friend bool operator==(const ProbTable&, const ProbTable&) = default;

private:
    std::vector<std::vector<double>> probs_;
};

/// How many times each production fires in a derivation.
struct ProductionCounts {
    std::vector<std::vector<std::uint32_t>> counts;

    std::uint32_t total(std::size_t nonterminal) const;

    friend bool operator==(const ProductionCounts&, const ProductionCounts&) = default;
};

ProbTable sample_prob_table(const Grammar& grammar, double dirichlet_alpha, Rng& rng);

/// Default cap on D/C expansions per derivation.
inline constexpr int kDefaultMaxDepth = 25;
/// Consecutive rejected attempts before sampling is declared divergent.
inline constexpr int kMaxConsecutiveRejections = 10000;

/// Samples a derivation top-down from S. Depth counts every expansion of a
/// D or C nonterminal; attempts that exceed max_depth are discarded and
/// redrawn with the same probabilities.
Formula sample_formula(const Grammar& grammar, const ProbTable& probs, Rng& rng,
                       int max_depth = kDefaultMaxDepth);

/// A single derivation attempt; empty when it exceeded max_depth.
std::optional<Formula> try_sample_formula(const Grammar& grammar, const ProbTable& probs, Rng& rng, int max_depth);

/// True when the formula has the shape the grammar can derive: at least one
/// conjunction, a non-empty first conjunction, features within range.
bool is_derivable(const Formula& formula, const Grammar& grammar);

ProductionCounts derivation_counts(const Formula& formula, const Grammar& grammar);

/// log P(formula | probs). Returns -infinity when the derivation uses a
/// production of probability zero.
double log_prob_given_probs(const Formula& formula, const Grammar& grammar, const ProbTable& probs);
double log_prob_given_probs(const ProductionCounts& counts, const ProbTable& probs);

/// log of the Dirichlet-integrated prior, in closed form:
/// sum over nonterminals Y of log B(counts_Y + alpha) - log B(alpha).
double marginal_log_prior(const Formula& formula, const Grammar& grammar, double dirichlet_alpha);
double marginal_log_prior(const ProductionCounts& counts, double dirichlet_alpha);

/// Default cap on enumerate_formulas output size.
inline constexpr std::size_t kDefaultEnumerationBudget = std::size_t{1} << 22;

/// All derivable formulas with at most max_literals literals whose
/// disjuncts each carry at least one literal (with empty disjuncts allowed
/// the set is infinite). Each formula appears once, in depth-first
/// derivation order.
///
/// Growth: with m = 2n literal choices there are m^L * 2^(L-1) formulas of
/// exactly L literals, i.e. about 8.9 million for n = 4, L <= 6. Exceeding
/// `budget` throws ResourceError.
std::vector<Formula> enumerate_formulas(const Grammar& grammar, int max_literals,
                                        std::size_t budget = kDefaultEnumerationBudget);

/// Number of formulas enumerate_formulas would return.
std::uint64_t count_enumerable_formulas(int n_features, int max_literals);

} // namespace rd
