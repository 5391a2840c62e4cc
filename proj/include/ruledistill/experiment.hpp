#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ruledistill/benchmarks.hpp"
#include "ruledistill/maml.hpp"
#include "ruledistill/rational_rules.hpp"

namespace rd {

struct AdaptOptions {
    int epochs = 1;
    /// Inner learning rate; unset means each checkpoint's own.
    std::optional<double> inner_lr;
    /// Training orders per checkpoint. Order 0 is the printed order, the
    /// others are shuffles drawn from `seed`.
    std::size_t orderings = 1;
    std::uint64_t seed = 0;
    /// Append zero-valued features when the network expects more inputs
    /// than the benchmark has.
    bool pad_features = false;
    int jobs = 1;
};

/// Per-test-object P(A) averaged over runs (checkpoint x ordering).
struct NetworkPrediction {
    std::vector<double> mean;
    std::vector<double> sd;
    std::vector<std::vector<double>> per_run; // [run][object]
};

/// Adapts each checkpoint on the concept's training examples and evaluates
/// the test objects.
NetworkPrediction predict_with_network(const std::vector<Checkpoint>& checkpoints, const BenchmarkConcept& structure,
                                       const AdaptOptions& options);

/// Randomly initialised networks; network i uses stream i of `seed`.
std::vector<Checkpoint> standard_networks(const MLPConfig& mlp, const MetaConfig& meta, std::size_t count,
                                          std::uint64_t seed);

/// Rational Rules P(A) for the concept's test objects after `blocks`
/// presentations of its training examples.
std::vector<double> predict_with_rr(const BenchmarkConcept& structure, int n_features, const RRConfig& config,
                                    int blocks = 1);

enum class SweepAxis { none, b, epochs };

std::string to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& s);

struct ExperimentSpec {
    std::string experiment; // a builtin benchmark name
    SweepAxis axis = SweepAxis::none;
    std::vector<int> points; // axis values; ignored for SweepAxis::none
    int b = 1;               // used when b is not swept
    int epochs = 1;          // used when epochs are not swept

    /// Prior-trained checkpoints (one per meta-training seed) keyed by the b
    /// of their corpus. Empty means no prior-trained predictor.
    std::map<int, std::vector<Checkpoint>> prior_trained;
    /// Random-init networks; empty means no standard predictor.
    std::vector<Checkpoint> standard;
    bool rr = true;
    RRConfig rr_config; // b is overridden per cell
    /// Run Rational Rules at this b in every cell instead of the cell's b.
    std::optional<int> rr_b;
    AdaptOptions adapt; // epochs is overridden per cell

    /// Where CSV and SVG files go; empty writes nothing.
    std::filesystem::path output_dir;
    bool plots = true;
};

struct PredictionRow {
    std::string predictor; // rr, prior_trained, standard
    int b = 1;
    int epochs = 1;
    std::string concept_name;
    std::string item;
    Object object;
    std::optional<bool> truth;
    double p_a = 0.0;
    double sd = 0.0;
    std::vector<double> per_run;
};

/// statistic is r2 (reference = a column name, or rr_model for the
/// computed Rational Rules predictions), error (reference = truth) or rank
/// (1 = lowest error within the cell).
struct SummaryRow {
    std::string predictor;
    int b = 1;
    int epochs = 1;
    std::string concept_name;
    std::string statistic;
    std::string reference;
    double value = 0.0;
};

struct EvalReport {
    std::string experiment;
    SweepAxis axis = SweepAxis::none;
    std::vector<int> points;
    std::vector<PredictionRow> predictions;
    std::vector<SummaryRow> summary;
    std::vector<std::string> notes;

    std::optional<double> find(const std::string& predictor, int b, int epochs, const std::string& concept_name,
                               const std::string& statistic, const std::string& reference = "") const;
    std::vector<double> predictions_for(const std::string& predictor, int b, int epochs,
                                        const std::string& concept_name) const;
};

/// Runs every predictor at every cell of the sweep and computes R^2 against
/// each reference column, error probabilities and error ranks.
EvalReport run_experiment(const ExperimentSpec& spec);

std::string predictions_csv(const EvalReport& report);
std::string per_run_csv(const EvalReport& report);
std::string summary_csv(const EvalReport& report);
std::string summary_text(const EvalReport& report);

/// Writes predictions.csv, per_run.csv, summary.csv, reference.csv and the
/// SVG plots; returns the paths written.
std::vector<std::filesystem::path> write_report(const EvalReport& report, const std::filesystem::path& dir,
                                                bool plots = true);

} // namespace rd
