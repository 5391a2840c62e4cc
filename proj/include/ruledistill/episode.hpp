#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "ruledistill/formula.hpp"
#include "ruledistill/grammar.hpp"
#include "ruledistill/rng.hpp"

namespace rd {

/// Outlier parameter b; labels flip with probability e^-b / (1 + e^-b).
class OutlierParam {
public:
    OutlierParam() = default;
    explicit OutlierParam(int b);

    int value() const noexcept { return b_; }

    friend bool operator==(const OutlierParam&, const OutlierParam&) = default;

private:
    int b_ = 1;
};

double flip_probability(OutlierParam b);

struct LabeledExample {
    Object object;
    bool label = false;   // true = category A
    bool flipped = false; // label disagrees with the rule

    friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

/// Largest support set an episode may carry.
inline constexpr int kMaxSupportSize = 20;

struct Episode {
    Formula rule; // the concept
    ProbTable prob_table;
    OutlierParam b;
    std::vector<LabeledExample> support;
    std::vector<LabeledExample> query;

    int n_features() const { return query.empty() ? 0 : query.front().object.n_features(); }

    /// Throws InvariantViolation if the support size is outside [1, 20], the
    /// query does not list every object exactly once, query labels are
    /// flipped, or any flag disagrees with the rule.
    void validate(int n_features) const;

    friend bool operator==(const Episode&, const Episode&) = default;
};

/// Support sizes are either fixed or drawn uniformly from {1, ..., 20}.
struct SupportSizePolicy {
    bool fixed = false;
    int size = kMaxSupportSize;

    static SupportSizePolicy uniform() { return {}; }
    static SupportSizePolicy exactly(int n) { return {true, n}; }
};

struct EpisodeSamplerConfig {
    double dirichlet_alpha = 1.0;
    OutlierParam b{1};
    SupportSizePolicy support_size = SupportSizePolicy::uniform();
    int max_depth = kDefaultMaxDepth;
};

/// Consecutive failed (probabilities, derivation) draws before giving up.
inline constexpr int kMaxRuleDraws = 1000;

struct RuleDraw {
    ProbTable prob_table;
    Formula rule;
    int attempts = 0; // draws used, including the successful one
};

/// Draws probabilities and one derivation, redrawing both until the derivation
/// stays within max_depth. The rule follows the marginal prior conditioned on
/// that event; each single draw yields formula f with probability
/// exp(marginal_log_prior(f)).
RuleDraw draw_rule(const Grammar& grammar, const EpisodeSamplerConfig& config, Rng& rng);

/// Draws a rule with draw_rule, then a support set sampled with replacement
/// and noised with flip_probability(b). The query set is every object with its
/// noiseless label.
Episode sample_episode(const Grammar& grammar, const EpisodeSamplerConfig& config, Rng& rng);

// ---------------------------------------------------------------------------
// corpus files

inline constexpr const char* kCorpusFormat = "episodes-v1";

struct CorpusConfig {
    std::filesystem::path output_dir;
    int n_features = 4;
    EpisodeSamplerConfig sampler;
    std::size_t n_train = 10000;
    std::size_t n_val = 100;
    std::size_t n_test = 100;
    std::uint64_t seed = 0;
    bool overwrite = false;
    int jobs = 1;
};

struct CorpusManifest {
    std::string format = kCorpusFormat;
    std::uint64_t seed = 0;
    int b = 1;
    double dirichlet_alpha = 1.0;
    int n_features = 4;
    int max_depth = kDefaultMaxDepth;
    std::string support_size; // "uniform" or the fixed size
    std::size_t n_train = 0, n_val = 0, n_test = 0;
    std::string train_file, val_file, test_file;
    std::string train_digest, val_digest, test_digest; // SHA-256 hex of each file

    /// Digest of the manifest's canonical text; checkpoints record it.
    std::string digest() const;
    std::string to_json() const;
    static CorpusManifest from_json(const std::string& text);
};

/// Writes train/val/test corpora plus manifest.json into output_dir and
/// returns the manifest path. Refuses to replace existing files unless
/// overwrite is set.
std::filesystem::path generate_corpus(const CorpusConfig& config);

CorpusManifest read_manifest(const std::filesystem::path& path);

/// One-line encoding of an episode (no trailing newline).
std::string episode_to_record(const Episode& episode);
Episode episode_from_record(const std::string& line, std::size_t line_number, int n_features);

/// Streams episodes from a corpus file, validating each record. Returns the
/// number of episodes read.
std::size_t read_corpus(const std::filesystem::path& path, const std::function<void(Episode&&)>& sink);

std::vector<Episode> read_corpus(const std::filesystem::path& path);

/// Writes a corpus file with a header line followed by one record per line.
void write_corpus(const std::filesystem::path& path, int n_features, const std::vector<Episode>& episodes);

/// Episode i of a split is drawn from stream split_seed(seed, split * 2^32 + i).
enum class CorpusSplit : std::uint64_t { train = 0, val = 1, test = 2 };
std::vector<Episode> sample_split(const Grammar& grammar, const EpisodeSamplerConfig& config, std::uint64_t seed,
                                  CorpusSplit split, std::size_t count, int jobs = 1);

} // namespace rd
