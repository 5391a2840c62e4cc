#include "ruledistill/rational_rules.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "ruledistill/errors.hpp"
#include "ruledistill/hypotheses.hpp"
#include "ruledistill/parallel.hpp"

namespace rd {

void RRConfig::validate() const {
    if (!(dirichlet_alpha > 0.0)) throw InvalidArgument("dirichlet_alpha must be positive");
    if (n_samples < 1) throw InvalidArgument("n_samples must be at least 1");
    if (max_literals < 1) throw InvalidArgument("max_literals must be at least 1");
    if (max_depth < 2) throw InvalidArgument("max_depth must be at least 2");
}

double log_likelihood(const Formula& formula, const std::vector<LabeledExample>& examples, OutlierParam b) {
    if (examples.empty()) throw InvalidArgument("log_likelihood needs at least one example");
    const double eps = flip_probability(b);
    int match = 0, miss = 0;
    for (const auto& e : examples) (evaluate(formula, e.object) == e.label ? match : miss) += 1;
    double ll = 0.0;
    if (match > 0) ll += match * std::log1p(-eps);
    if (miss > 0) ll += miss * std::log(eps);
    return ll;
}

namespace {

void check_examples(const Grammar& grammar, const std::vector<LabeledExample>& examples) {
    for (const auto& e : examples)
        if (e.object.n_features() != grammar.n_features())
            throw InvalidArgument("example object " + e.object.to_string() + " does not match the grammar's " +
                                  std::to_string(grammar.n_features()) + " features");
}

int mismatches(std::uint64_t table, const std::vector<LabeledExample>& examples) {
    int m = 0;
    for (const auto& e : examples) m += (((table >> e.object.code()) & 1u) != 0) != e.label;
    return m;
}

/// Fills p_a from per-table log prior weights. Returns sum(w)^2 / sum(w^2 / c)
/// style ESS when `counts` is given (importance sampling), 0 otherwise.
double weigh(PosteriorPredictive& out, const std::vector<std::uint64_t>& tables, const std::vector<double>& log_prior,
             const std::vector<double>* counts, const std::vector<LabeledExample>& examples, double b) {
    const std::size_t n_obj = std::size_t{1} << out.n_features;
    std::vector<double> logw(tables.size());
    double mx = -INFINITY;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        logw[i] = log_prior[i] - b * mismatches(tables[i], examples);
        mx = std::max(mx, logw[i]);
    }
    if (!std::isfinite(mx)) throw InferenceDegenerate("posterior has zero total weight");
    out.p_a.assign(n_obj, 0.0);
    double z = 0.0, sum_w = 0.0, sum_w2 = 0.0;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        const double w = std::exp(logw[i] - mx);
        z += w;
        for (std::size_t o = 0; o < n_obj; ++o)
            if ((tables[i] >> o) & 1u) out.p_a[o] += w;
        if (counts) {
            // w already includes the count; per-sample weight is w / c
            const double c = (*counts)[i];
            sum_w += w;
            sum_w2 += w * w / c;
        }
    }
    if (!(z > 0.0)) throw InferenceDegenerate("posterior has zero total weight");
    for (auto& p : out.p_a) p = std::clamp(p / z, 0.0, 1.0);
    return counts ? sum_w * sum_w / sum_w2 : 0.0;
}

PosteriorPredictive by_enumeration(const Grammar& grammar, const std::vector<LabeledExample>& examples,
                                   const RRConfig& config) {
    const HypothesisTable& h = cached_hypotheses(grammar, config.dirichlet_alpha, config.max_literals);
    PosteriorPredictive out;
    out.n_features = grammar.n_features();
    out.prior_mass = h.total_mass;
    out.hypotheses = h.formula_count;
    std::vector<double> log_prior(h.mass.size());
    std::transform(h.mass.begin(), h.mass.end(), log_prior.begin(), [](double m) { return std::log(m); });
    weigh(out, h.tables, log_prior, nullptr, examples, config.b.value());
    return out;
}

constexpr std::uint64_t kChunk = 1u << 15;

struct ChunkResult {
    std::unordered_map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t rejected = 0;
};

bool in_bounded_space(const Formula& f, int max_literals) {
    if (f.literal_count() > static_cast<std::size_t>(max_literals)) return false;
    return std::none_of(f.conjunctions.begin(), f.conjunctions.end(),
                        [](const Conjunction& c) { return c.literals.empty(); });
}

ChunkResult sample_chunk(const Grammar& grammar, const RRConfig& config, std::uint64_t chunk, std::uint64_t count) {
    Rng rng = Rng::stream(config.seed, chunk);
    ChunkResult r;
    const int n = grammar.n_features();
    // any formula inside the bound has at most 3L - 1 D/C expansions
    const int depth = config.restrict_samples ? std::min(config.max_depth, 3 * config.max_literals) : config.max_depth;
    std::uint64_t streak = 0;
    for (std::uint64_t s = 0; s < count;) {
        const ProbTable theta = sample_prob_table(grammar, config.dirichlet_alpha, rng);
        auto f = try_sample_formula(grammar, theta, rng, depth);
        if (!f || (config.restrict_samples && !in_bounded_space(*f, config.max_literals))) {
            ++r.rejected;
            if (++streak >= static_cast<std::uint64_t>(kMaxConsecutiveRejections))
                throw SamplingDiverged("importance sampling rejected " + std::to_string(streak) +
                                       " consecutive prior draws");
            continue;
        }
        streak = 0;
        ++r.counts[truth_table(*f, n)];
        ++s;
    }
    return r;
}

PosteriorPredictive by_sampling(const Grammar& grammar, const std::vector<LabeledExample>& examples,
                                const RRConfig& config) {
    const std::uint64_t n_chunks = (config.n_samples + kChunk - 1) / kChunk;
    std::vector<ChunkResult> chunks(n_chunks);
    parallel_for(n_chunks, config.jobs, [&](std::size_t c) {
        const std::uint64_t begin = c * kChunk;
        chunks[c] = sample_chunk(grammar, config, c, std::min(kChunk, config.n_samples - begin));
    });
    // integer counts merge identically in any order; std::map fixes the table order
    std::map<std::uint64_t, std::uint64_t> merged;
    std::uint64_t rejected = 0;
    for (const auto& ch : chunks) {
        for (const auto& [t, c] : ch.counts) merged[t] += c;
        rejected += ch.rejected;
    }
    std::vector<std::uint64_t> tables;
    std::vector<double> log_prior, counts;
    for (const auto& [t, c] : merged) {
        tables.push_back(t);
        counts.push_back(static_cast<double>(c));
        log_prior.push_back(std::log(static_cast<double>(c)));
    }
    PosteriorPredictive out;
    out.n_features = grammar.n_features();
    out.hypotheses = config.n_samples;
    out.prior_mass = static_cast<double>(config.n_samples) / static_cast<double>(config.n_samples + rejected);
    out.ess = weigh(out, tables, log_prior, &counts, examples, config.b.value());
    if (out.ess < kMinEffectiveSampleSize)
        out.warnings.push_back("effective sample size " + std::to_string(out.ess) +
                               " is below 50; raise n_samples");
    return out;
}

} // namespace

PosteriorPredictive posterior_predictive(const Grammar& grammar, const std::vector<LabeledExample>& examples,
                                         const RRConfig& config) {
    config.validate();
    check_examples(grammar, examples);
    return config.method == InferenceMethod::enumeration ? by_enumeration(grammar, examples, config)
                                                         : by_sampling(grammar, examples, config);
}

PosteriorPredictive predict_blocks(const Grammar& grammar, const std::vector<LabeledExample>& examples,
                                   int n_blocks, const RRConfig& config) {
    if (n_blocks < 1) throw InvalidArgument("n_blocks must be at least 1");
    RRConfig scaled = config;
    scaled.b = OutlierParam(config.b.value() * n_blocks);
    return posterior_predictive(grammar, examples, scaled);
}

} // namespace rd
