// Acceptance gate: runs criteria 1-11 and prints one PASS/FAIL line each.
//
//   acceptance [--cache DIR] [--only 1,6,8]
//
// Meta-trained checkpoints are cached in DIR keyed by their full training
// configuration, so reruns only repeat the evaluation.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ruledistill/benchmarks.hpp"
#include "ruledistill/digest.hpp"
#include "ruledistill/episode.hpp"
#include "ruledistill/errors.hpp"
#include "ruledistill/experiment.hpp"
#include "ruledistill/hypotheses.hpp"
#include "ruledistill/maml.hpp"
#include "ruledistill/rational_rules.hpp"
#include "ruledistill/stats.hpp"

using namespace rd;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

fs::path g_cache;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

void detail(const std::string& s) { std::printf("    %s\n", s.c_str()); std::fflush(stdout); }

struct Outcome {
    bool pass = false;
    std::string summary;
};

// ---------------------------------------------------------------------------
// training with a checkpoint cache

struct TrainSpec {
    int n_features = 4;
    int b = 1;
    std::size_t n_train = 2000;
    std::size_t n_val = 100;
    std::uint64_t corpus_seed = 0;
    MLPConfig mlp;
    MetaConfig meta;

    std::string key() const {
        std::ostringstream s;
        s << "v1 n=" << n_features << " b=" << b << " train=" << n_train << " val=" << n_val << " cseed=" << corpus_seed
          << " mlp=" << mlp.to_string() << " inner=" << meta.inner_lr << " outer=" << meta.outer_lr
          << " batch=" << meta.meta_batch_size << " passes=" << meta.max_passes << " patience=" << meta.patience
          << " fo=" << meta.first_order << " seed=" << meta.seed;
        return s.str();
    }
};

struct Trained {
    Checkpoint checkpoint;
    double seconds = 0.0; // training time, also for cached runs
};

Trained train_cached(const TrainSpec& spec) {
    const std::string key = spec.key();
    const std::string stem = to_hex(sha256(key)).substr(0, 20);
    const fs::path ck_path = g_cache / (stem + ".rdck");
    const fs::path meta_path = g_cache / (stem + ".txt");
    if (fs::exists(ck_path) && fs::exists(meta_path)) {
        try {
            Trained t{load_checkpoint(ck_path, &spec.mlp), 0.0};
            std::ifstream in(meta_path);
            std::string stored_key;
            std::getline(in, stored_key);
            in >> t.seconds;
            if (stored_key == key) return t;
        } catch (const Error&) {
            // stale or damaged entry: retrain
        }
    }
    const Grammar g = default_grammar(spec.n_features);
    EpisodeSamplerConfig sampler;
    sampler.b = OutlierParam(spec.b);
    const auto t0 = Clock::now();
    const auto train = sample_split(g, sampler, spec.corpus_seed, CorpusSplit::train, spec.n_train);
    const auto val = sample_split(g, sampler, spec.corpus_seed, CorpusSplit::val, spec.n_val);
    TrainResult r = meta_train(train, val, spec.mlp, spec.meta, key);
    Trained t{std::move(r.checkpoint), seconds_since(t0)};
    t.checkpoint.corpus_b = spec.b;
    fs::create_directories(g_cache);
    save_checkpoint(ck_path, t.checkpoint);
    std::ofstream(meta_path) << key << '\n' << t.seconds << '\n';
    detail("trained " + key + " in " + fmt("%.0fs", t.seconds) + ", best pass " +
           std::to_string(t.checkpoint.passes) + fmt(", val loss %.4f", t.checkpoint.val_loss));
    return t;
}

MLPConfig tiny_baseline(int n) { return {n, 3, 32, 0.1, false}; }
MLPConfig tiny_modified(int n) { return {n, 3, 64, 0.1, true}; }

// Sweep corpora: 2000 episodes, at most 6 passes.
TrainSpec sweep_spec(int n_features, int b, const MLPConfig& mlp, std::uint64_t seed) {
    TrainSpec s;
    s.n_features = n_features;
    s.b = b;
    s.corpus_seed = 1000 * static_cast<std::uint64_t>(n_features) + static_cast<std::uint64_t>(b);
    s.mlp = mlp;
    s.meta.max_passes = 6;
    s.meta.patience = 3;
    s.meta.seed = seed;
    return s;
}

std::vector<LabeledExample> ms_training() { return benchmark("medin-schaffer").concepts[0].training; }

// ---------------------------------------------------------------------------
// criteria

Outcome c1_rr_table() {
    const auto& ms = benchmark("medin-schaffer").concepts[0];
    const auto t0 = Clock::now();
    RRConfig cfg; // enumeration, max_literals 6, alpha 1, b 1
    const auto pred = predict_with_rr(ms, 4, cfg);
    const double secs = seconds_since(t0);
    const auto printed = ms.column_values("rr_b1");
    double sum = 0.0, worst = 0.0, signed_sum = 0.0;
    std::string row;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - printed[i];
        sum += std::abs(d);
        signed_sum += d;
        worst = std::max(worst, std::abs(d));
        row += ms.tests[i].label + fmt("=%.3f ", pred[i]);
    }
    const double mad = sum / static_cast<double>(pred.size());
    detail(row);
    detail(fmt("mean signed deviation %+.4f", signed_sum / static_cast<double>(pred.size())));
    return {mad <= 0.05 && worst <= 0.10 && secs <= 60.0,
            fmt("MAD %.4f (<= 0.05)", mad) + fmt(", max %.4f (<= 0.10)", worst) + fmt(", %.1fs (<= 60s)", secs)};
}

Outcome c2_shj_rr() {
    const auto& shj = benchmark("shj");
    const double target[] = {0.00, 0.17, 0.24, 0.24, 0.25, 0.48};
    RRConfig cfg;
    cfg.b = OutlierParam(3);
    bool ok = true;
    std::string s;
    for (std::size_t k = 0; k < shj.concepts.size(); ++k) {
        const auto& c = shj.concepts[k];
        const auto p = predict_with_rr(c, 3, cfg);
        std::vector<bool> truth;
        for (const auto& t : c.tests) truth.push_back(*t.truth);
        const double e = error_probability(p, truth);
        ok = ok && std::abs(e - target[k]) <= 0.05;
        s += c.name + fmt("=%.3f", e) + fmt("(%.2f) ", target[k]);
    }
    return {ok, "errors " + s + "(+-0.05)"};
}

Outcome c3_blocks() {
    const Grammar g = default_grammar(4);
    RRConfig cfg;
    cfg.b = OutlierParam(2);
    const auto blocks = predict_blocks(g, ms_training(), 3, cfg);
    cfg.b = OutlierParam(6);
    const auto single = posterior_predictive(g, ms_training(), cfg);
    std::size_t equal = 0;
    for (std::size_t i = 0; i < 16; ++i) equal += blocks.p_a[i] == single.p_a[i];
    return {equal == 16, std::to_string(equal) + "/16 objects bit-identical (b=2, 3 blocks vs b=6)"};
}

Outcome c4_enum_vs_is() {
    const Grammar g = default_grammar(4);
    RRConfig cfg;
    const auto exact = posterior_predictive(g, ms_training(), cfg);
    const auto& table = cached_hypotheses(g, cfg.dirichlet_alpha, cfg.max_literals);
    cfg.method = InferenceMethod::importance_sampling;
    cfg.n_samples = 1'000'000;
    cfg.seed = 4;
    const auto t0 = Clock::now();
    const auto is = posterior_predictive(g, ms_training(), cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < 16; ++i) worst = std::max(worst, std::abs(is.p_a[i] - exact.p_a[i]));
    detail(fmt("IS: 1e6 samples in %.1fs", seconds_since(t0)) + fmt(", ESS %.0f", is.ess));
    detail(fmt("target space: formulas with <= 6 literals and no empty disjunct; enumeration covers 100%% of it "
               "(%.4f of the unbounded prior mass)",
               table.total_mass));
    return {worst <= 0.01, fmt("max per-object |IS - enum| %.4f (<= 0.01)", worst)};
}

double max_gradient_error(const std::function<Var(const std::vector<Var>&)>& loss, ParamSet p) {
    const auto vars = as_parameters(p);
    const auto grads = grad(loss(vars), vars);
    const double h = 1e-6;
    double worst = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k)
        for (std::size_t i = 0; i < p[k].size(); ++i) {
            const double saved = p[k][i];
            p[k][i] = saved + h;
            const double up = loss(as_parameters(p)).item();
            p[k][i] = saved - h;
            const double down = loss(as_parameters(p)).item();
            p[k][i] = saved;
            const double fd = (up - down) / (2 * h);
            const double a = grads[k].value()[i];
            worst = std::max(worst, std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-5}));
        }
    return worst;
}

Outcome c5_autodiff() {
    std::vector<Object> objs;
    for (const char* s : {"0001", "0101", "0100", "0010", "1000", "0011", "1001", "1110", "1111"})
        objs.push_back(Object::parse(s));
    const Tensor x = encode_objects(objs, 4);
    Tensor y({objs.size(), 1});
    for (std::size_t i = 0; i < 5; ++i) y[i] = 1.0;

    double first = 0.0;
    struct Case {
        const char* name;
        MLPConfig mlp;
    };
    for (const Case& c : {Case{"dense", {4, 3, 8, 0.0, false}}, Case{"skip", {4, 4, 8, 0.0, true}},
                          Case{"single layer", {4, 1, 1, 0.0, false}}}) {
        Rng rng(31);
        const ParamSet p = init_params(c.mlp, rng);
        const double logits = max_gradient_error(
            [&](const std::vector<Var>& v) {
                return bce_with_logits(forward_logits(v, c.mlp, Var::constant(x), Mode::eval), y);
            },
            p);
        const double probs = max_gradient_error(
            [&](const std::vector<Var>& v) {
                return bce_loss(sigmoid(forward_logits(v, c.mlp, Var::constant(x), Mode::eval)), y);
            },
            p);
        detail(std::string(c.name) + fmt(": logit-BCE rel err %.2e", logits) + fmt(", sigmoid+BCE rel err %.2e", probs));
        first = std::max({first, logits, probs});
    }

    // two-parameter toy: one weight, one bias, three inner steps
    const MLPConfig toy{1, 1, 1, 0.0, false};
    MetaConfig meta;
    meta.inner_lr = 0.8;
    Episode ep;
    ep.rule = Formula::parse("(f1=1)");
    const Object zero(1, 0), one(1, 1);
    ep.support = {{one, true, false}, {zero, false, false}, {one, true, false}};
    ep.query = {{zero, false, false}, {one, true, false}};
    double second = 0.0;
    for (const auto& start : {std::pair{0.3, -0.2}, std::pair{-1.1, 0.7}}) {
        ParamSet p = {Tensor::matrix(1, 1, {start.first}), Tensor::matrix(1, 1, {start.second})};
        Rng rng(1);
        const auto g = episode_meta_gradient(p, toy, meta, ep, 0.0, rng);
        for (std::size_t k = 0; k < 2; ++k) {
            const double h = 1e-6, saved = p[k][0];
            p[k][0] = saved + h;
            const double up = episode_meta_loss(p, toy, meta, ep);
            p[k][0] = saved - h;
            const double down = episode_meta_loss(p, toy, meta, ep);
            p[k][0] = saved;
            const double fd = (up - down) / (2 * h);
            second = std::max(second, std::abs(g.grad[k][0] - fd) / std::max(std::abs(fd), 1e-8));
        }
    }
    return {first <= 1e-4 && second <= 1e-3,
            fmt("gradient rel err %.2e (<= 1e-4)", first) + fmt(", second-order toy rel err %.2e (<= 1e-3)", second)};
}

Outcome c6_distillation() {
    const auto& ms = benchmark("medin-schaffer").concepts[0];
    std::vector<double> vs_human, vs_rr, secs;
    std::vector<std::vector<double>> preds;
    for (std::uint64_t seed : {1, 2, 3}) {
        TrainSpec s;
        s.b = 2;
        s.n_train = 10000;
        s.corpus_seed = 2;
        s.mlp = tiny_baseline(4);
        s.meta.max_passes = 12;
        s.meta.patience = 3;
        s.meta.seed = seed;
        const Trained t = train_cached(s);
        const auto p = predict_with_network({t.checkpoint}, ms, {}).mean;
        vs_human.push_back(r_squared(p, ms.column_values("human")));
        vs_rr.push_back(r_squared(p, ms.column_values("rr_b1")));
        secs.push_back(t.seconds);
        preds.push_back(p);
        std::string row;
        for (std::size_t i = 0; i < p.size(); ++i) row += ms.tests[i].label + fmt("=%.2f ", p[i]);
        detail("seed " + std::to_string(seed) + fmt(": R2 human %.3f", vs_human.back()) +
               fmt(", R2 RR %.3f", vs_rr.back()) + fmt(", trained in %.0fs", t.seconds));
        detail(row);
    }
    const double h = median(vs_human), r = median(vs_rr);
    const double slowest = *std::max_element(secs.begin(), secs.end());
    return {h >= 0.85 && r >= 0.80 && slowest <= 7200.0,
            fmt("median R2 vs human %.3f (>= 0.85)", h) + fmt(", vs RR %.3f (>= 0.80)", r) +
                fmt(", 10k-episode training %.0fs (<= 7200s)", slowest)};
}

Outcome c7_standard() {
    const auto& ms = benchmark("medin-schaffer").concepts[0];
    const MLPConfig mlp = MLPConfig::baseline(4);
    const auto nets = standard_networks(mlp, MetaConfig{}, 10, 7);
    const auto pred = predict_with_network(nets, ms, {});
    const auto human = ms.column_values("human");
    const auto r2 = try_r_squared(pred.mean, human);
    std::vector<double> per_net;
    for (const auto& run : pred.per_run) per_net.push_back(try_r_squared(run, human).value_or(0.0));
    const auto [lo, hi] = std::minmax_element(pred.mean.begin(), pred.mean.end());
    detail(fmt("10 random-init baseline networks: outputs in [%.3f, ", *lo) + fmt("%.3f]", *hi));
    detail(fmt("per-network R2 vs human: median %.3f", median(per_net)) +
           fmt(", min %.3f", *std::min_element(per_net.begin(), per_net.end())) +
           fmt(", max %.3f", *std::max_element(per_net.begin(), per_net.end())));
    // One small gradient step from a random init moves each output along its
    // linear similarity to the training items, so compare with that vote.
    std::vector<double> vote;
    const auto train = encode_objects([&] {
        std::vector<Object> o;
        for (const auto& e : ms.training) o.push_back(e.object);
        return o;
    }(), 4);
    const auto tests = encode_objects(ms.test_objects(), 4);
    for (std::size_t t = 0; t < ms.tests.size(); ++t) {
        double v = 0.0;
        for (std::size_t i = 0; i < ms.training.size(); ++i) {
            double dot = 0.0;
            for (std::size_t j = 0; j < 4; ++j) dot += tests[t * 4 + j] * train[i * 4 + j];
            v += ms.training[i].label ? dot : -dot;
        }
        vote.push_back(v);
    }
    detail(fmt("linear similarity vote over the training items: R2 vs human %.3f", r_squared(vote, human)) +
           fmt(", vs the averaged networks %.3f", r_squared(vote, pred.mean)));
    const double v = r2.value_or(0.0);
    return {v <= 0.2, (r2 ? fmt("R2 vs human %.3f", v) : std::string("R2 undefined (constant output)")) +
                          " (<= 0.2), averaged over 10 networks"};
}

struct SweepCheckpoints {
    std::map<int, std::vector<Checkpoint>> modified; // keyed by b
    Checkpoint baseline_b1;
};

SweepCheckpoints sweep_checkpoints(int n_features) {
    SweepCheckpoints out;
    for (int b = 1; b <= 8; ++b)
        out.modified[b].push_back(
            train_cached(sweep_spec(n_features, b, tiny_modified(n_features), static_cast<std::uint64_t>(b))).checkpoint);
    out.baseline_b1 = train_cached(sweep_spec(n_features, 1, tiny_baseline(n_features), 11)).checkpoint;
    return out;
}

EvalReport network_sweep(const std::string& experiment, SweepAxis axis, std::map<int, std::vector<Checkpoint>> cks) {
    ExperimentSpec spec;
    spec.experiment = experiment;
    spec.axis = axis;
    spec.points = {1, 2, 3, 4, 5, 6, 7, 8};
    spec.b = 1;
    spec.prior_trained = std::move(cks);
    spec.rr = false;
    spec.adapt.orderings = 5;
    spec.adapt.seed = 8;
    return run_experiment(spec);
}

Outcome c8_ls_nls(const SweepCheckpoints& cks) {
    bool ok = true;
    std::string b_row, n_row;
    const auto by_b = network_sweep("ls-nls", SweepAxis::b, cks.modified);
    for (int b = 1; b <= 8; ++b) {
        const double ls = *by_b.find("prior_trained", b, 1, "LS", "error", "truth");
        const double nls = *by_b.find("prior_trained", b, 1, "NLS", "error", "truth");
        ok = ok && nls < ls;
        b_row += fmt("%.2f/", ls) + fmt("%.2f ", nls);
    }
    const auto by_n = network_sweep("ls-nls", SweepAxis::epochs, {{1, {cks.baseline_b1}}});
    for (int n = 1; n <= 8; ++n) {
        const double ls = *by_n.find("prior_trained", 1, n, "LS", "error", "truth");
        const double nls = *by_n.find("prior_trained", 1, n, "NLS", "error", "truth");
        ok = ok && nls < ls;
        n_row += fmt("%.2f/", ls) + fmt("%.2f ", nls);
    }
    detail("LS/NLS error, b = 1..8 (modified): " + b_row);
    detail("LS/NLS error, N = 1..8 (baseline, b = 1): " + n_row);
    return {ok, "error(NLS) < error(LS) at every b and every N"};
}

Outcome c9_shj(const SweepCheckpoints& cks) {
    const std::vector<std::string> names = {"I", "II", "III", "IV", "V", "VI"};
    bool ok = true;
    std::vector<std::string> inversions;
    auto check = [&](const EvalReport& r, int b, int n, const std::string& tag) {
        std::vector<double> e;
        for (const auto& c : names) e.push_back(*r.find("prior_trained", b, n, c, "error", "truth"));
        const bool good = std::min_element(e.begin(), e.end()) == e.begin() && std::max_element(e.begin(), e.end()) == e.end() - 1;
        ok = ok && good;
        std::string row;
        for (std::size_t k = 0; k < e.size(); ++k) row += names[k] + fmt("=%.3f ", e[k]);
        detail(tag + ": " + row + (good ? "" : " <- order violated"));
        if (e[1] > e[2]) inversions.push_back(tag);
    };
    const auto by_b = network_sweep("shj", SweepAxis::b, cks.modified);
    for (int b = 1; b <= 8; ++b) check(by_b, b, 1, "b=" + std::to_string(b));
    const auto by_n = network_sweep("shj", SweepAxis::epochs, {{1, {cks.baseline_b1}}});
    for (int n = 1; n <= 8; ++n) check(by_n, 1, n, "N=" + std::to_string(n));
    std::string inv = inversions.empty() ? "none" : "";
    for (const auto& s : inversions) inv += s + " ";
    detail("II > III (reported, not gated) at: " + inv);
    return {ok, "concept I lowest and VI highest error at every b and every N (3-feature corpora)"};
}

Outcome c10_medin82(const SweepCheckpoints& cks) {
    const auto& m82 = benchmark("medin82").concepts[0];
    AdaptOptions opt;
    opt.orderings = 5;
    opt.seed = 10;
    const auto p1 = predict_with_network(cks.modified.at(1), m82, opt).mean;
    const auto p7 = predict_with_network(cks.modified.at(7), m82, opt).mean;
    const double r1 = r_squared(p1, m82.column_values("human_initial"));
    const double r7 = r_squared(p7, m82.column_values("human_final"));
    detail(fmt("b=7 vs final-block humans: R2 %.3f (reported, not gated; the printed value is 0.56 and fit is "
               "expected to degrade for rules with low prior probability)",
               r7));
    return {r1 >= 0.50, fmt("b=1 vs initial-block humans: R2 %.3f (>= 0.50)", r1)};
}

Outcome c11_sampler() {
    const Grammar g = default_grammar(4);
    // flip rate over 10^5 support labels at several b
    bool flips_ok = true;
    std::string flip_row;
    for (int b : {0, 1, 2, 4}) {
        EpisodeSamplerConfig cfg;
        cfg.b = OutlierParam(b);
        cfg.support_size = SupportSizePolicy::exactly(20);
        Rng rng = Rng::stream(11, static_cast<std::uint64_t>(b));
        double n = 0, flipped = 0;
        while (n < 100000)
            for (const auto& s : sample_episode(g, cfg, rng).support) {
                n += 1;
                flipped += s.flipped;
            }
        const double p = flip_probability(OutlierParam(b));
        const double z = (flipped - n * p) / std::sqrt(n * p * (1 - p));
        flips_ok = flips_ok && std::abs(z) <= 3.0;
        flip_row += "b=" + std::to_string(b) + fmt(" z=%+.2f ", z);
    }
    detail("flip rate: " + flip_row);

    // Rule frequencies under the episode sampler vs the closed-form marginal
    // prior. Every draw, including those rejected for depth, counts as a trial.
    std::size_t draws = 0;
    std::map<std::string, std::size_t> counts;
    Rng rng = Rng::stream(11, 100);
    while (draws < 1'000'000) {
        const RuleDraw d = draw_rule(g, EpisodeSamplerConfig{}, rng);
        draws += static_cast<std::size_t>(d.attempts);
        ++counts[d.rule.to_string()];
    }
    double worst = 0.0;
    std::size_t checked = 0;
    for (const auto& f : enumerate_formulas(g, 2)) {
        const double p = std::exp(marginal_log_prior(f, g, 1.0));
        const auto it = counts.find(f.to_string());
        const double c = it == counts.end() ? 0.0 : static_cast<double>(it->second);
        const double n = static_cast<double>(draws);
        const double z = (c - n * p) / std::sqrt(n * p * (1 - p));
        worst = std::max(worst, std::abs(z));
        ++checked;
    }
    detail(std::to_string(checked) + " formulas with <= 2 literals over " + std::to_string(draws) + " draws: " + fmt("max |z| %.2f", worst));
    return {flips_ok && worst <= 3.0, "flip rates and formula frequencies within 3 sigma"};
}

} // namespace

int main(int argc, char** argv) {
    g_cache = fs::path("acceptance_cache");
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--cache" && i + 1 < argc) {
            g_cache = argv[++i];
        } else if (a == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            std::string item;
            while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
        } else {
            std::fprintf(stderr, "usage: acceptance [--cache DIR] [--only 1,2,...]\n");
            return 2;
        }
    }
    auto wanted = [&](int c) { return only.empty() || only.count(c) > 0; };

    std::vector<std::pair<int, Outcome>> results;
    auto run = [&](int id, const std::function<Outcome()>& fn) {
        if (!wanted(id)) return;
        std::printf("C%d\n", id);
        std::fflush(stdout);
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        std::printf("%s C%d %s [%.0fs]\n", o.pass ? "PASS" : "FAIL", id, o.summary.c_str(), seconds_since(t0));
        std::fflush(stdout);
        results.emplace_back(id, o);
    };

    run(1, c1_rr_table);
    run(2, c2_shj_rr);
    run(3, c3_blocks);
    run(4, c4_enum_vs_is);
    run(5, c5_autodiff);
    run(6, c6_distillation);
    run(7, c7_standard);
    if (wanted(8) || wanted(9) || wanted(10)) {
        SweepCheckpoints four, three;
        if (wanted(8) || wanted(10)) four = sweep_checkpoints(4);
        if (wanted(9)) three = sweep_checkpoints(3);
        run(8, [&] { return c8_ls_nls(four); });
        run(9, [&] { return c9_shj(three); });
        run(10, [&] { return c10_medin82(four); });
    }
    run(11, c11_sampler);

    std::printf("\nsummary\n");
    int failed = 0;
    for (const auto& [id, o] : results) {
        std::printf("  %s C%d %s\n", o.pass ? "PASS" : "FAIL", id, o.summary.c_str());
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
    return failed == 0 ? 0 : 1;
}
