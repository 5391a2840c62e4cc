#pragma once

#include <span>
#include <string>
#include <vector>

#include "ruledistill/autodiff.hpp"
#include "ruledistill/formula.hpp"
#include "ruledistill/rng.hpp"
#include "ruledistill/tensor.hpp"

namespace rd {

/// Fully connected network with ReLU hidden layers and one output logit.
/// `depth` counts linear layers, so depth 5 has four hidden layers. With
/// skip connections each hidden-to-hidden block computes h + relu(W h + b).
struct MLPConfig {
    int input_dim = 4;
    int depth = 5;
    int hidden = 128;
    double dropout_rate = 0.1;
    bool skip_connections = false;

    /// Hidden 128, 5 layers, dropout 0.1.
    static MLPConfig baseline(int n_features);
    /// Baseline with hidden 256 and skip connections.
    static MLPConfig modified(int n_features);

    void validate() const;
    std::string to_string() const;

    friend bool operator==(const MLPConfig&, const MLPConfig&) = default;
};

/// Weights and biases in layer order: W_0, b_0, W_1, b_1, ... with W_l of
/// shape [fan_in, fan_out] and b_l of shape [1, fan_out].
using ParamSet = std::vector<Tensor>;

std::vector<Shape> param_shapes(const MLPConfig& config);

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for every weight and bias.
ParamSet init_params(const MLPConfig& config, Rng& rng);
ParamSet zero_params(const MLPConfig& config);

/// Throws InvalidArgument unless shapes match the config and all values are finite.
void check_params(const ParamSet& params, const MLPConfig& config);

std::size_t parameter_count(const MLPConfig& config);

enum class Mode { train, eval };

/// Rows of +-1 values: bit 0 becomes -1, bit 1 becomes +1.
Tensor encode_objects(std::span<const Object> objects, int n_features);

/// Logits of shape [batch, 1]. In train mode with a positive dropout rate
/// `rng` must be non-null; masks are drawn from it in layer order.
Var forward_logits(std::span<const Var> params, const MLPConfig& config, const Var& inputs, Mode mode,
                   Rng* rng = nullptr);

/// Sigmoid probabilities of shape [batch, 1], without recording.
Tensor forward(const ParamSet& params, const MLPConfig& config, const Tensor& inputs, Mode mode,
               Rng* rng = nullptr);

/// Smallest probability used inside the logarithms of bce_loss.
inline constexpr double kProbabilityFloor = 1e-12;

/// Mean binary cross-entropy of probabilities against 0/1 labels, with the
/// probabilities clamped to [1e-12, 1 - 1e-12].
Var bce_loss(const Var& probabilities, const Tensor& labels);
double bce_loss(const Tensor& probabilities, const Tensor& labels);

/// The same loss computed from logits, numerically stable and smooth; used
/// for training.
Var bce_with_logits(const Var& logits, const Tensor& labels);

std::vector<Var> as_parameters(const ParamSet& params);
ParamSet values_of(std::span<const Var> vars);

} // namespace rd
