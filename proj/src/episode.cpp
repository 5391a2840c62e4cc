#include "ruledistill/episode.hpp"

#include <cmath>
#include <set>

#include "ruledistill/errors.hpp"
#include "ruledistill/parallel.hpp"

namespace rd {

OutlierParam::OutlierParam(int b) : b_(b) {
    if (b < 0) throw InvalidArgument("outlier parameter b must be non-negative, got " + std::to_string(b));
}

double flip_probability(OutlierParam b) {
    const double e = std::exp(-static_cast<double>(b.value()));
    return e / (1.0 + e);
}

void Episode::validate(int n) const {
    const auto n_objects = std::size_t{1} << n;
    if (support.empty() || support.size() > static_cast<std::size_t>(kMaxSupportSize))
        throw InvariantViolation("support size " + std::to_string(support.size()) + " outside [1, 20]");
    if (query.size() != n_objects)
        throw InvariantViolation("query has " + std::to_string(query.size()) + " objects, expected " +
                                 std::to_string(n_objects));
    if (rule.max_feature() > n) throw InvariantViolation("rule references a feature beyond n");
    std::set<std::uint32_t> seen;
    for (const auto& q : query) {
        if (q.object.n_features() != n) throw InvariantViolation("query object has wrong feature count");
        if (!seen.insert(q.object.code()).second)
            throw InvariantViolation("query repeats object " + q.object.to_string());
        if (q.flipped) throw InvariantViolation("query labels must not be flipped");
        if (q.label != evaluate(rule, q.object))
            throw InvariantViolation("query label disagrees with rule at " + q.object.to_string());
    }
    for (const auto& s : support) {
        if (s.object.n_features() != n) throw InvariantViolation("support object has wrong feature count");
        if (s.flipped != (s.label != evaluate(rule, s.object)))
            throw InvariantViolation("support flip flag inconsistent at " + s.object.to_string());
    }
}

RuleDraw draw_rule(const Grammar& grammar, const EpisodeSamplerConfig& config, Rng& rng) {
    for (int attempt = 1; attempt <= kMaxRuleDraws; ++attempt) {
        ProbTable probs = sample_prob_table(grammar, config.dirichlet_alpha, rng);
        if (auto f = try_sample_formula(grammar, probs, rng, config.max_depth))
            return {std::move(probs), *std::move(f), attempt};
    }
    throw SamplingDiverged(std::to_string(kMaxRuleDraws) + " consecutive rule draws exceeded depth " +
                           std::to_string(config.max_depth));
}

Episode sample_episode(const Grammar& grammar, const EpisodeSamplerConfig& config, Rng& rng) {
    const auto& policy = config.support_size;
    if (policy.fixed && (policy.size < 1 || policy.size > kMaxSupportSize))
        throw InvalidArgument("support size must be in [1, 20], got " + std::to_string(policy.size));
    Episode ep;
    ep.b = config.b;
    RuleDraw draw = draw_rule(grammar, config, rng);
    ep.prob_table = std::move(draw.prob_table);
    ep.rule = std::move(draw.rule);

    const int n = grammar.n_features();
    const auto n_objects = std::uint64_t{1} << n;
    const int size = policy.fixed ? policy.size : static_cast<int>(rng.below(kMaxSupportSize)) + 1;
    const double eps = flip_probability(config.b);
    ep.support.reserve(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) {
        Object o(n, static_cast<std::uint32_t>(rng.below(n_objects)));
        const bool truth = evaluate(ep.rule, o);
        const bool flip = rng.bernoulli(eps);
        ep.support.push_back({o, truth != flip, flip});
    }
    for (const auto& o : all_objects(n)) ep.query.push_back({o, evaluate(ep.rule, o), false});
    return ep;
}

std::vector<Episode> sample_split(const Grammar& grammar, const EpisodeSamplerConfig& config, std::uint64_t seed,
                                  CorpusSplit split, std::size_t count, int jobs) {
    std::vector<Episode> out(count);
    const auto base = static_cast<std::uint64_t>(split) << 32;
    parallel_for(count, jobs, [&](std::size_t i) {
        Rng rng = Rng::stream(seed, base + i);
        out[i] = sample_episode(grammar, config, rng);
    });
    return out;
}

} // namespace rd
