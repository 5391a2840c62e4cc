#include "ruledistill/maml.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ruledistill/errors.hpp"
#include "ruledistill/parallel.hpp"

namespace rd {

void MetaConfig::validate() const {
    if (!(inner_lr >= 0.0) || !(outer_lr > 0.0)) throw InvalidArgument("learning rates must be positive");
    if (inner_epochs < 1) throw InvalidArgument("inner_epochs must be at least 1");
    if (meta_batch_size < 1) throw InvalidArgument("meta_batch_size must be at least 1");
    if (max_passes < 0) throw InvalidArgument("max_passes must be non-negative");
    if (patience < 1) throw InvalidArgument("patience must be at least 1");
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0) || !(adam_epsilon > 0.0))
        throw InvalidArgument("invalid Adam moment parameters");
}

std::string to_string(StepWeights w) {
    switch (w) {
    case StepWeights::uniform: return "uniform";
    case StepWeights::final_only: return "final-only";
    case StepWeights::annealed: return "annealed";
    }
    return "uniform";
}

StepWeights parse_step_weights(const std::string& s) {
    if (s == "uniform") return StepWeights::uniform;
    if (s == "final-only") return StepWeights::final_only;
    if (s == "annealed") return StepWeights::annealed;
    throw InvalidArgument("unknown step weighting '" + s + "' (expected uniform, final-only or annealed)");
}

Batch Batch::from_examples(const std::vector<LabeledExample>& examples, int n_features) {
    std::vector<Object> objects;
    Tensor labels({examples.size(), 1});
    for (std::size_t i = 0; i < examples.size(); ++i) {
        objects.push_back(examples[i].object);
        labels[i] = examples[i].label ? 1.0 : 0.0;
    }
    return {encode_objects(objects, n_features), std::move(labels)};
}

Batch Batch::row(std::size_t i) const {
    const std::size_t n = inputs.cols();
    std::vector<double> x(inputs.data().begin() + static_cast<std::ptrdiff_t>(i * n),
                          inputs.data().begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
    return {Tensor({1, n}, std::move(x)), Tensor({1, 1}, labels[i])};
}

std::vector<std::vector<Var>> inner_adapt(const std::vector<Var>& params, const MLPConfig& mlp, const Batch& support,
                                          int steps, double inner_lr, InnerGraph graph, bool per_example, Mode mode,
                                          Rng* rng) {
    if (steps < 0) throw InvalidArgument("inner_adapt: steps must be non-negative");
    if (support.size() == 0) throw InvalidArgument("inner_adapt: empty support set");
    std::vector<std::vector<Var>> trajectory{params};
    trajectory.reserve(static_cast<std::size_t>(steps) + 1);
    for (int j = 0; j < steps; ++j) {
        const auto& cur = trajectory.back();
        const Batch b = per_example ? support.row(static_cast<std::size_t>(j) % support.size()) : support;
        const Var loss = bce_with_logits(forward_logits(cur, mlp, Var::constant(b.inputs), mode, rng), b.labels);
        if (!std::isfinite(loss.item()))
            throw NumericDivergence("inner loop loss is not finite at step " + std::to_string(j));
        const auto g = grad(loss, cur, graph == InnerGraph::second_order);
        std::vector<Var> next;
        next.reserve(cur.size());
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (graph == InnerGraph::detached)
                next.push_back(Var::parameter(kernel::sub(cur[i].value(), kernel::affine(g[i].value(), inner_lr, 0.0))));
            else
                next.push_back(sub(cur[i], affine(g[i], inner_lr)));
        }
        trajectory.push_back(std::move(next));
    }
    return trajectory;
}

std::vector<double> step_weights(StepWeights scheme, std::size_t k, double progress) {
    if (k == 0) throw InvalidArgument("step_weights: need at least one step");
    std::vector<double> w(k, 0.0);
    switch (scheme) {
    case StepWeights::uniform: std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(k)); break;
    case StepWeights::final_only: w.back() = 1.0; break;
    case StepWeights::annealed: {
        const double t = std::clamp(progress, 0.0, 1.0);
        std::fill(w.begin(), w.end(), (1.0 - t) / static_cast<double>(k));
        w.back() += t;
        break;
    }
    }
    return w;
}

Var multi_step_query_loss(const std::vector<std::vector<Var>>& trajectory, const MLPConfig& mlp, const Batch& query,
                          const std::vector<double>& weights, Mode mode, Rng* rng) {
    if (trajectory.size() < 2) throw InvalidArgument("multi_step_query_loss: trajectory has no post-step states");
    if (weights.size() != trajectory.size() - 1)
        throw InvalidArgument("multi_step_query_loss: expected " + std::to_string(trajectory.size() - 1) + " weights");
    const Var x = Var::constant(query.inputs);
    Var total;
    for (std::size_t j = 1; j < trajectory.size(); ++j) {
        if (weights[j - 1] == 0.0) continue;
        Var term = affine(bce_with_logits(forward_logits(trajectory[j], mlp, x, mode, rng), query.labels), weights[j - 1]);
        total = total.defined() ? add(total, term) : term;
    }
    return total.defined() ? total : Var::constant(Tensor::scalar(0.0));
}

namespace {

int inner_steps(const MetaConfig& meta, const Episode& ep) {
    return meta.full_batch_inner ? meta.inner_epochs : meta.inner_epochs * static_cast<int>(ep.support.size());
}

void check_episode(const Episode& ep, const MLPConfig& mlp) {
    if (ep.n_features() != mlp.input_dim)
        throw InvalidArgument("episode has " + std::to_string(ep.n_features()) + " features but the network expects " +
                              std::to_string(mlp.input_dim));
}

} // namespace

EpisodeGradient episode_meta_gradient(const ParamSet& params, const MLPConfig& mlp, const MetaConfig& meta,
                                      const Episode& episode, double progress, Rng& rng) {
    check_episode(episode, mlp);
    const auto vars = as_parameters(params);
    const Batch support = Batch::from_examples(episode.support, mlp.input_dim);
    const Batch query = Batch::from_examples(episode.query, mlp.input_dim);
    const int steps = inner_steps(meta, episode);
    const auto trajectory =
        inner_adapt(vars, mlp, support, steps, meta.inner_lr,
                    meta.first_order ? InnerGraph::first_order : InnerGraph::second_order, !meta.full_batch_inner,
                    Mode::train, &rng);
    const auto w = step_weights(meta.step_weights, static_cast<std::size_t>(steps), progress);
    const Var loss = multi_step_query_loss(trajectory, mlp, query, w, Mode::train, &rng);
    if (!std::isfinite(loss.item())) throw NumericDivergence("meta loss is not finite");
    return {loss.item(), values_of(grad(loss, vars, false))};
}

double episode_meta_loss(const ParamSet& params, const MLPConfig& mlp, const MetaConfig& meta, const Episode& episode) {
    check_episode(episode, mlp);
    const Batch support = Batch::from_examples(episode.support, mlp.input_dim);
    const Batch query = Batch::from_examples(episode.query, mlp.input_dim);
    const int steps = inner_steps(meta, episode);
    const auto trajectory = inner_adapt(as_parameters(params), mlp, support, steps, meta.inner_lr, InnerGraph::detached,
                                        !meta.full_batch_inner, Mode::eval);
    NoGradGuard guard;
    return multi_step_query_loss(trajectory, mlp, query, step_weights(meta.step_weights, trajectory.size() - 1, 1.0))
        .item();
}

namespace {

double mean_meta_loss(const ParamSet& params, const MLPConfig& mlp, const MetaConfig& meta,
                      const std::vector<Episode>& episodes) {
    std::vector<double> losses(episodes.size());
    parallel_for(episodes.size(), meta.jobs,
                 [&](std::size_t i) { losses[i] = episode_meta_loss(params, mlp, meta, episodes[i]); });
    const double m = std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(losses.size());
    if (!std::isfinite(m)) throw NumericDivergence("validation loss is not finite");
    return m;
}

class Adam {
public:
    Adam(const ParamSet& like, const MetaConfig& meta) : meta_(meta), m_(like), v_(like) {
        for (auto* set : {&m_, &v_})
            for (auto& t : *set) std::fill(t.data().begin(), t.data().end(), 0.0);
    }

    void step(ParamSet& params, const ParamSet& g) {
        ++t_;
        if (meta_.optimizer == OuterOptimizer::sgd) {
            for (std::size_t i = 0; i < params.size(); ++i)
                for (std::size_t k = 0; k < params[i].size(); ++k) params[i][k] -= meta_.outer_lr * g[i][k];
            return;
        }
        const double b1 = meta_.adam_beta1, b2 = meta_.adam_beta2;
        const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
        for (std::size_t i = 0; i < params.size(); ++i) {
            for (std::size_t k = 0; k < params[i].size(); ++k) {
                const double gk = g[i][k];
                m_[i][k] = b1 * m_[i][k] + (1.0 - b1) * gk;
                v_[i][k] = b2 * v_[i][k] + (1.0 - b2) * gk * gk;
                params[i][k] -= meta_.outer_lr * (m_[i][k] / c1) / (std::sqrt(v_[i][k] / c2) + meta_.adam_epsilon);
            }
        }
    }

private:
    const MetaConfig& meta_;
    ParamSet m_, v_;
    std::uint64_t t_ = 0;
};

} // namespace

TrainResult meta_train(const std::vector<Episode>& train, const std::vector<Episode>& val, const MLPConfig& mlp,
                       const MetaConfig& meta, const std::string& manifest_digest,
                       const std::function<void(const PassLog&)>& on_pass) {
    mlp.validate();
    meta.validate();
    if (train.empty()) throw InvalidArgument("meta_train: empty training corpus");
    if (val.empty()) throw InvalidArgument("meta_train: empty validation corpus");
    for (const auto* set : {&train, &val})
        for (const auto& ep : *set) check_episode(ep, mlp);

    Rng init_rng = Rng::stream(meta.seed, 0);
    ParamSet params = init_params(mlp, init_rng);

    TrainResult result;
    auto& best = result.checkpoint;
    best = {mlp, meta, params, manifest_digest, 0, 0, mean_meta_loss(params, mlp, meta, val)};
    result.log.push_back({0, NAN, best.val_loss, 0});
    if (on_pass) on_pass(result.log.back());

    Adam optimizer(params, meta);
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t batch = static_cast<std::size_t>(meta.meta_batch_size);
    const std::size_t n_batches = (train.size() + batch - 1) / batch;
    std::uint64_t outer_steps = 0;
    int stale = 0;
    for (int pass = 1; pass <= meta.max_passes; ++pass) {
        const std::uint64_t pass_seed = split_seed(meta.seed, static_cast<std::uint64_t>(pass));
        Rng shuffle_rng = Rng::stream(pass_seed, 0);
        shuffle_rng.shuffle(std::span<std::size_t>(order));
        double train_loss = 0.0;
        for (std::size_t b = 0; b < n_batches; ++b) {
            const std::size_t begin = b * batch, end = std::min(train.size(), begin + batch);
            const double progress = (static_cast<double>(pass - 1) + static_cast<double>(b) / static_cast<double>(n_batches)) /
                                    static_cast<double>(meta.max_passes);
            std::vector<EpisodeGradient> parts(end - begin);
            parallel_for(parts.size(), meta.jobs, [&](std::size_t i) {
                Rng rng = Rng::stream(pass_seed, 1 + begin + i);
                parts[i] = episode_meta_gradient(params, mlp, meta, train[order[begin + i]], progress, rng);
            });
            // reduce in batch order so the sum does not depend on scheduling
            ParamSet g = parts.front().grad;
            for (std::size_t i = 1; i < parts.size(); ++i)
                for (std::size_t t = 0; t < g.size(); ++t) g[t] = kernel::add(g[t], parts[i].grad[t]);
            const double scale = 1.0 / static_cast<double>(parts.size());
            for (auto& t : g) {
                t = kernel::affine(t, scale, 0.0);
                if (!t.all_finite()) throw NumericDivergence("meta-gradient is not finite in pass " + std::to_string(pass));
            }
            for (const auto& p : parts) train_loss += p.loss;
            optimizer.step(params, g);
            ++outer_steps;
        }
        train_loss /= static_cast<double>(train.size());
        const double val_loss = mean_meta_loss(params, mlp, meta, val);
        result.log.push_back({pass, train_loss, val_loss, outer_steps});
        if (on_pass) on_pass(result.log.back());
        if (val_loss < best.val_loss) {
            best.params = params;
            best.val_loss = val_loss;
            best.outer_steps = outer_steps;
            best.passes = pass;
            stale = 0;
        } else if (++stale >= meta.patience) {
            break;
        }
    }
    return result;
}

ParamSet adapt(const ParamSet& params, const MLPConfig& mlp, const std::vector<LabeledExample>& support, int epochs,
               double inner_lr) {
    if (epochs < 0) throw InvalidArgument("adapt: epochs must be non-negative");
    check_params(params, mlp);
    if (epochs == 0) return params;
    const Batch b = Batch::from_examples(support, mlp.input_dim);
    const auto trajectory = inner_adapt(as_parameters(params), mlp, b, epochs * static_cast<int>(b.size()), inner_lr,
                                        InnerGraph::detached, true, Mode::eval);
    return values_of(trajectory.back());
}

} // namespace rd
