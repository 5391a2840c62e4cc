#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ruledistill/episode.hpp"
#include "ruledistill/grammar.hpp"

namespace rd {

enum class InferenceMethod { enumeration, importance_sampling };

struct RRConfig {
    OutlierParam b{1};
    double dirichlet_alpha = 1.0;
    InferenceMethod method = InferenceMethod::enumeration;
    std::uint64_t n_samples = 1'000'000;
    /// Literal bound of the hypothesis space. Enumeration always uses it;
    /// importance sampling uses it when restrict_samples is set.
    int max_literals = 6;
    /// Reject prior samples outside the enumerable space (more than
    /// max_literals literals, or an empty disjunct) so both methods target
    /// the same posterior.
    bool restrict_samples = true;
    int max_depth = kDefaultMaxDepth;
    std::uint64_t seed = 0;
    int jobs = 1;

    void validate() const;
};

struct PosteriorPredictive {
    int n_features = 0;
    std::vector<double> p_a;  // indexed by object code
    double ess = 0.0;         // effective sample size (sampling only)
    double prior_mass = 0.0;  // prior mass of the hypothesis space used
    std::uint64_t hypotheses = 0;
    std::vector<std::string> warnings;

    double at(const Object& o) const { return p_a.at(o.code()); }
};

/// ESS below this triggers a warning.
inline constexpr double kMinEffectiveSampleSize = 50.0;

/// k log(1 - eps) + m log(eps) for k matches and m mismatches.
double log_likelihood(const Formula& formula, const std::vector<LabeledExample>& examples, OutlierParam b);

/// Posterior probability of category A for every object. Posterior weights
/// are prior * e^{-b m}; the (1 - eps)^N factor shared by all formulas
/// cancels, which is what makes the block identity exact.
PosteriorPredictive posterior_predictive(const Grammar& grammar, const std::vector<LabeledExample>& examples,
                                         const RRConfig& config);

/// Predictive after n_blocks presentations of the examples at parameter b,
/// computed as a single presentation at b * n_blocks.
PosteriorPredictive predict_blocks(const Grammar& grammar, const std::vector<LabeledExample>& examples,
                                   int n_blocks, const RRConfig& config);

} // namespace rd
