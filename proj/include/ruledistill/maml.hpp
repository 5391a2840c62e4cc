#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ruledistill/episode.hpp"
#include "ruledistill/mlp.hpp"

namespace rd {

/// How the query loss is spread over the post-step parameters.
enum class StepWeights {
    uniform,    // 1/k on each of theta_1..theta_k
    final_only, // vanilla MAML
    annealed,   // uniform at the start of training, final-only at the end
};

enum class OuterOptimizer { adam, sgd };

struct MetaConfig {
    double inner_lr = 0.1;
    double outer_lr = 0.0005;
    int inner_epochs = 1;
    int meta_batch_size = 16;
    /// Upper bound on passes over the training corpus.
    int max_passes = 100;
    /// Stop once validation loss has not improved for this many passes.
    int patience = 5;
    bool first_order = false;
    StepWeights step_weights = StepWeights::uniform;
    /// One inner step per support example (default) or per full support set.
    bool full_batch_inner = false;
    OuterOptimizer optimizer = OuterOptimizer::adam;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t seed = 0;
    int jobs = 1;

    void validate() const;

    friend bool operator==(const MetaConfig&, const MetaConfig&) = default;
};

std::string to_string(StepWeights w);
StepWeights parse_step_weights(const std::string& s);

/// What the inner trajectory records.
enum class InnerGraph {
    detached,     // plain gradient descent, nothing recorded
    first_order,  // theta_j depends on theta_0 through the identity only
    second_order, // gradients are recorded; full meta-gradient
};

/// A support or query set as network inputs and 0/1 labels.
struct Batch {
    Tensor inputs; // [m, n] of +-1
    Tensor labels; // [m, 1]

    static Batch from_examples(const std::vector<LabeledExample>& examples, int n_features);
    std::size_t size() const { return inputs.rows(); }
    Batch row(std::size_t i) const;
};

/// theta_j = theta_{j-1} - lr * grad L(theta_{j-1}) for `steps` steps. With
/// per-example steps, step j uses support row j mod |support| in order.
/// Returns theta_0..theta_steps. Throws NumericDivergence on a non-finite loss.
std::vector<std::vector<Var>> inner_adapt(const std::vector<Var>& params, const MLPConfig& mlp, const Batch& support,
                                          int steps, double inner_lr, InnerGraph graph, bool per_example = true,
                                          Mode mode = Mode::eval, Rng* rng = nullptr);

/// Weight of each post-step state theta_1..theta_k. `progress` in [0, 1] is
/// only used by the annealed schedule.
std::vector<double> step_weights(StepWeights scheme, std::size_t k, double progress = 0.0);

/// Sum over j >= 1 of w_j * BCE(query | theta_j).
Var multi_step_query_loss(const std::vector<std::vector<Var>>& trajectory, const MLPConfig& mlp, const Batch& query,
                          const std::vector<double>& weights, Mode mode = Mode::eval, Rng* rng = nullptr);

/// Meta-objective for one episode and its gradient with respect to params.
struct EpisodeGradient {
    double loss = 0.0;
    ParamSet grad;
};

EpisodeGradient episode_meta_gradient(const ParamSet& params, const MLPConfig& mlp, const MetaConfig& meta,
                                      const Episode& episode, double progress, Rng& rng);

/// Meta-objective of an episode without gradients (dropout off).
double episode_meta_loss(const ParamSet& params, const MLPConfig& mlp, const MetaConfig& meta, const Episode& episode);

struct Checkpoint {
    MLPConfig mlp;
    MetaConfig meta;
    ParamSet params;
    std::string manifest_digest;
    std::uint64_t outer_steps = 0;
    int passes = 0;
    double val_loss = 0.0;
    int corpus_b = 0; // b of the training corpus; 0 when unknown

    friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

struct PassLog {
    int pass = 0; // 0 is the initialization
    double train_loss = 0.0;
    double val_loss = 0.0;
    std::uint64_t outer_steps = 0;
};

struct TrainResult {
    Checkpoint checkpoint; // best validation loss
    std::vector<PassLog> log;
};

/// Optimises the initialization on `train` episodes, evaluating `val` each
/// pass. The optional callback receives each pass log as it completes.
TrainResult meta_train(const std::vector<Episode>& train, const std::vector<Episode>& val, const MLPConfig& mlp,
                       const MetaConfig& meta, const std::string& manifest_digest = {},
                       const std::function<void(const PassLog&)>& on_pass = {});

/// Plain gradient descent from `params` for `epochs` passes over the support
/// set, one example per step in order, dropout off. epochs = 0 returns params.
ParamSet adapt(const ParamSet& params, const MLPConfig& mlp, const std::vector<LabeledExample>& support, int epochs,
               double inner_lr);

// ---------------------------------------------------------------------------
// checkpoint files

inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string serialize_checkpoint(const Checkpoint& checkpoint);
Checkpoint parse_checkpoint(const std::string& bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
/// When `expected` is given the stored MLP config must match it.
Checkpoint load_checkpoint(const std::filesystem::path& path, const MLPConfig* expected = nullptr);

} // namespace rd
