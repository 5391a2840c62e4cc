#pragma once

#include <cstdint>
#include <vector>

#include "ruledistill/grammar.hpp"

namespace rd {

/// Prior mass of a bounded formula space, aggregated by truth table.
/// Posterior predictions depend on a formula only through its truth table
/// and its prior, so this is all inference needs.
struct HypothesisTable {
    int n_features = 0;
    std::vector<std::uint64_t> tables; // distinct truth tables, ascending
    std::vector<double> mass;          // summed prior mass per table
    double total_mass = 0.0;           // sum of `mass`
    std::uint64_t formula_count = 0;   // formulas folded into the table
};

/// Marginal (Dirichlet-integrated) prior mass of every formula that
/// enumerate_formulas(grammar, max_literals) would produce, folded by truth
/// table without materialising the formulas.
HypothesisTable enumerate_hypotheses(const Grammar& grammar, double dirichlet_alpha, int max_literals);

/// Same as enumerate_hypotheses but memoised per (n_features, alpha,
/// max_literals). Thread-safe.
const HypothesisTable& cached_hypotheses(const Grammar& grammar, double dirichlet_alpha, int max_literals);

} // namespace rd
