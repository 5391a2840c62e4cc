#include <cmath>

#include "ruledistill/errors.hpp"
#include "ruledistill/grammar.hpp"

namespace rd {

bool is_derivable(const Formula& formula, const Grammar& grammar) {
    if (formula.conjunctions.empty() || formula.conjunctions.front().literals.empty()) return false;
    for (const auto& c : formula.conjunctions)
        for (const auto& l : c.literals)
            if (l.feature < 1 || l.feature > grammar.n_features()) return false;
    return true;
}

ProductionCounts derivation_counts(const Formula& formula, const Grammar& grammar) {
    if (!is_derivable(formula, grammar))
        throw InvalidArgument("formula '" + formula.to_string() + "' is not derivable in the grammar");
    ProductionCounts pc;
    for (const auto& nt : grammar.nonterminals()) pc.counts.emplace_back(nt.productions.size(), 0u);
    pc.counts[Grammar::kStart][0] = 1;
    pc.counts[Grammar::kDTop][0] = 1;
    pc.counts[Grammar::kCTop][0] = 1;
    const auto k = static_cast<std::uint32_t>(formula.conjunctions.size());
    const auto lits = static_cast<std::uint32_t>(formula.literal_count());
    pc.counts[Grammar::kD][Grammar::kRecurse] = k - 1;
    pc.counts[Grammar::kD][Grammar::kStop] = 1;
    // the first literal is introduced by C_top; every conjunction ends in True
    pc.counts[Grammar::kC][Grammar::kRecurse] = lits - 1;
    pc.counts[Grammar::kC][Grammar::kStop] = k;
    for (const auto& c : formula.conjunctions) {
        for (const auto& l : c.literals) {
            pc.counts[Grammar::kP][static_cast<std::size_t>(l.feature - 1)] += 1;
            pc.counts[grammar.feature_nonterminal(l.feature)][l.value ? Grammar::kValueOne : Grammar::kValueZero] += 1;
        }
    }
    return pc;
}

double log_prob_given_probs(const ProductionCounts& counts, const ProbTable& probs) {
    double lp = 0.0;
    if (counts.counts.size() != probs.rows().size()) throw InvalidArgument("counts do not match probability table");
    for (std::size_t y = 0; y < counts.counts.size(); ++y) {
        const auto& row = probs[y];
        if (row.size() != counts.counts[y].size()) throw InvalidArgument("counts do not match probability table");
        for (std::size_t s = 0; s < row.size(); ++s) {
            const auto c = counts.counts[y][s];
            if (c == 0) continue;
            if (row[s] <= 0.0) return -INFINITY;
            lp += static_cast<double>(c) * std::log(row[s]);
        }
    }
    return lp;
}

double log_prob_given_probs(const Formula& formula, const Grammar& grammar, const ProbTable& probs) {
    probs.check_compatible(grammar);
    return log_prob_given_probs(derivation_counts(formula, grammar), probs);
}

double marginal_log_prior(const ProductionCounts& counts, double dirichlet_alpha) {
    if (!(dirichlet_alpha > 0.0)) throw InvalidArgument("dirichlet_alpha must be positive");
    double lp = 0.0;
    for (const auto& row : counts.counts) {
        if (row.size() < 2) continue; // B ratio is 1
        double sum_ac = 0.0;
        double lg = 0.0;
        for (auto c : row) {
            lg += std::lgamma(c + dirichlet_alpha) - std::lgamma(dirichlet_alpha);
            sum_ac += c + dirichlet_alpha;
        }
        lp += lg - std::lgamma(sum_ac) + std::lgamma(dirichlet_alpha * static_cast<double>(row.size()));
    }
    return lp;
}

double marginal_log_prior(const Formula& formula, const Grammar& grammar, double dirichlet_alpha) {
    return marginal_log_prior(derivation_counts(formula, grammar), dirichlet_alpha);
}

} // namespace rd
