#include "ruledistill/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "ruledistill/errors.hpp"

namespace rd {

MLPConfig MLPConfig::baseline(int n_features) { return {n_features, 5, 128, 0.1, false}; }

MLPConfig MLPConfig::modified(int n_features) { return {n_features, 5, 256, 0.1, true}; }

void MLPConfig::validate() const {
    if (input_dim < 1) throw InvalidArgument("input_dim must be at least 1");
    if (depth < 1) throw InvalidArgument("depth must be at least 1");
    if (hidden < 1) throw InvalidArgument("hidden must be at least 1");
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw InvalidArgument("dropout_rate must be in [0, 1)");
}

std::string MLPConfig::to_string() const {
    return "input_dim=" + std::to_string(input_dim) + " depth=" + std::to_string(depth) +
           " hidden=" + std::to_string(hidden) + " dropout=" + std::to_string(dropout_rate) +
           " skip=" + (skip_connections ? "true" : "false");
}

std::vector<Shape> param_shapes(const MLPConfig& config) {
    config.validate();
    std::vector<Shape> shapes;
    for (int l = 0; l < config.depth; ++l) {
        const auto in = static_cast<std::size_t>(l == 0 ? config.input_dim : config.hidden);
        const auto out = static_cast<std::size_t>(l == config.depth - 1 ? 1 : config.hidden);
        shapes.push_back({in, out});
        shapes.push_back({1, out});
    }
    return shapes;
}

std::size_t parameter_count(const MLPConfig& config) {
    std::size_t n = 0;
    for (const auto& s : param_shapes(config)) n += s[0] * s[1];
    return n;
}

ParamSet init_params(const MLPConfig& config, Rng& rng) {
    ParamSet params;
    for (const auto& shape : param_shapes(config)) params.emplace_back(shape);
    for (std::size_t l = 0; l < params.size(); l += 2) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(params[l].rows()));
        for (auto* t : {&params[l], &params[l + 1]})
            for (auto& v : t->data()) v = bound * (2.0 * rng.uniform() - 1.0);
    }
    return params;
}

ParamSet zero_params(const MLPConfig& config) {
    ParamSet params;
    for (const auto& shape : param_shapes(config)) params.emplace_back(shape);
    return params;
}

void check_params(const ParamSet& params, const MLPConfig& config) {
    const auto shapes = param_shapes(config);
    if (params.size() != shapes.size())
        throw InvalidArgument("expected " + std::to_string(shapes.size()) + " parameter tensors, got " +
                              std::to_string(params.size()));
    for (std::size_t i = 0; i < shapes.size(); ++i) {
        if (params[i].shape() != shapes[i])
            throw InvalidArgument("parameter " + std::to_string(i) + " has shape " + params[i].shape_string());
        if (!params[i].all_finite()) throw InvalidArgument("parameter " + std::to_string(i) + " is not finite");
    }
}

Tensor encode_objects(std::span<const Object> objects, int n_features) {
    Tensor out({objects.size(), static_cast<std::size_t>(n_features)});
    for (std::size_t r = 0; r < objects.size(); ++r) {
        if (objects[r].n_features() != n_features)
            throw InvalidArgument("object " + objects[r].to_string() + " does not have " + std::to_string(n_features) +
                                  " features");
        for (int i = 1; i <= n_features; ++i)
            out.at(r, static_cast<std::size_t>(i - 1)) = objects[r].feature(i) ? 1.0 : -1.0;
    }
    return out;
}

namespace {

Var dropout(const Var& h, double rate, Rng& rng) {
    Tensor mask = h.value();
    const double keep = 1.0 - rate;
    for (auto& v : mask.data()) v = rng.bernoulli(keep) ? 1.0 / keep : 0.0;
    return mul_const(h, mask);
}

} // namespace

Var forward_logits(std::span<const Var> params, const MLPConfig& config, const Var& inputs, Mode mode, Rng* rng) {
    const auto shapes = param_shapes(config);
    if (params.size() != shapes.size()) throw InvalidArgument("parameter count does not match the MLP config");
    for (std::size_t i = 0; i < shapes.size(); ++i)
        if (params[i].value().shape() != shapes[i])
            throw InvalidArgument("parameter " + std::to_string(i) + " has shape " + params[i].value().shape_string());
    const auto& x = inputs.value();
    if (x.shape().size() != 2 || x.cols() != static_cast<std::size_t>(config.input_dim))
        throw InvalidArgument("input of shape " + x.shape_string() + " does not match input_dim " +
                              std::to_string(config.input_dim));
    const bool drop = mode == Mode::train && config.dropout_rate > 0.0;
    if (drop && rng == nullptr) throw InvalidArgument("train-mode dropout needs a random source");

    Var h = inputs;
    for (int l = 0; l < config.depth; ++l) {
        const auto w = static_cast<std::size_t>(2 * l);
        Var z = add_row(matmul(h, params[w]), params[w + 1]);
        if (l == config.depth - 1) return z;
        Var a = relu(z);
        if (drop) a = dropout(a, config.dropout_rate, *rng);
        h = (config.skip_connections && l > 0) ? add(h, a) : a;
    }
    return h; // unreachable: depth >= 1
}

Tensor forward(const ParamSet& params, const MLPConfig& config, const Tensor& inputs, Mode mode, Rng* rng) {
    NoGradGuard guard;
    const auto vars = as_parameters(params);
    return sigmoid(forward_logits(vars, config, Var::constant(inputs), mode, rng)).value();
}

namespace {

void check_labels(const Tensor& values, const Tensor& labels) {
    if (!values.same_shape(labels))
        throw InvalidArgument("labels of shape " + labels.shape_string() + " do not match " + values.shape_string());
}

} // namespace

Var bce_loss(const Var& probabilities, const Tensor& labels) {
    check_labels(probabilities.value(), labels);
    Tensor ones_minus = labels;
    for (auto& v : ones_minus.data()) v = 1.0 - v;
    // clamp p to [floor, 1 - floor]
    const Var log_p = log_clamped(probabilities, kProbabilityFloor);
    const Var log_q = log_clamped(affine(probabilities, -1.0, 1.0), kProbabilityFloor);
    return affine(mean(add(mul_const(log_p, labels), mul_const(log_q, ones_minus))), -1.0);
}

double bce_loss(const Tensor& probabilities, const Tensor& labels) {
    NoGradGuard guard;
    return bce_loss(Var::constant(probabilities), labels).item();
}

Var bce_with_logits(const Var& logits, const Tensor& labels) {
    check_labels(logits.value(), labels);
    // softplus(z) - y z
    return mean(sub(softplus(logits), mul_const(logits, labels)));
}

std::vector<Var> as_parameters(const ParamSet& params) {
    std::vector<Var> out;
    out.reserve(params.size());
    for (const auto& p : params) out.push_back(Var::parameter(p));
    return out;
}

ParamSet values_of(std::span<const Var> vars) {
    ParamSet out;
    out.reserve(vars.size());
    for (const auto& v : vars) out.push_back(v.value());
    return out;
}

} // namespace rd
