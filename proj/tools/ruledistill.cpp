// ruledistill: corpus generation, Rational Rules inference, meta-training
// and benchmark evaluation.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ruledistill/benchmarks.hpp"
#include "ruledistill/config.hpp"
#include "ruledistill/csv.hpp"
#include "ruledistill/episode.hpp"
#include "ruledistill/errors.hpp"
#include "ruledistill/experiment.hpp"
#include "ruledistill/maml.hpp"
#include "ruledistill/rational_rules.hpp"

namespace {

using namespace rd;

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kDivergence = 3, kIo = 4 };

struct Common {
    std::string config_file;
    std::uint64_t seed = 0;
    std::string out;
    bool overwrite = false;
    int jobs = 1;
    bool deterministic = false;
    std::string format = "text";

    int workers() const { return deterministic ? 1 : jobs; }
};

void add_common(CLI::App* sub, Common& c, const std::string& default_out) {
    c.out = default_out;
    sub->add_option("--config", c.config_file, "key = value file; flags override it");
    sub->add_option("--seed", c.seed, "master seed");
    sub->add_option("--out", c.out, "output directory");
    sub->add_flag("--overwrite", c.overwrite, "replace existing outputs");
    sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--deterministic", c.deterministic, "single worker, serial reductions");
    sub->add_option("--format", c.format, "stdout format")->check(CLI::IsMember({"csv", "text"}));
}

std::string option_key(const CLI::Option* opt) {
    const auto& names = opt->get_lnames();
    return names.empty() ? std::string() : names.front();
}

/// Fills options not given on the command line from the config file
/// (flag > file > default) and returns the resolved settings.
KeyValues resolve(CLI::App* sub, const std::string& config_file) {
    KeyValues file;
    if (!config_file.empty()) file = load_key_values(config_file);
    for (const auto& [key, value] : file) {
        if (key == "config") throw ConfigError("config files may not name another config file");
        CLI::Option* opt = nullptr;
        for (auto* o : sub->get_options())
            if (option_key(o) == key) opt = o;
        if (!opt) throw ConfigError("unknown config key '" + key + "' for " + sub->get_name());
        if (opt->count() > 0 || value.empty()) continue;
        try {
            opt->add_result(value);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw ConfigError("config key '" + key + "': " + e.what());
        }
    }
    KeyValues resolved;
    for (const auto* o : sub->get_options()) {
        const std::string key = option_key(o);
        if (key.empty() || key == "help" || key == "config") continue;
        std::string value;
        if (o->count() > 0) {
            const auto& r = o->results();
            for (std::size_t i = 0; i < r.size(); ++i) value += (i ? " " : "") + r[i];
            if (o->get_expected_max() == 0 && (value.empty() || value == "1")) value = "true";
        } else {
            value = o->get_default_str();
            if (o->get_expected_max() == 0 && value.empty()) value = "false";
        }
        if (!value.empty()) resolved[key] = value;
    }
    return resolved;
}

RunConfig run_config(CLI::App* sub, const Common& c) {
    // resolve first: it may fill seed, out and overwrite from the file
    KeyValues values = resolve(sub, c.config_file);
    return {sub->get_name(), c.config_file, c.seed, c.out, c.overwrite, std::move(values)};
}

void write_text(const std::filesystem::path& path, const std::string& text, bool overwrite) {
    if (std::filesystem::exists(path) && !overwrite)
        throw IoError(path.string() + " exists; pass --overwrite to replace it");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path.string());
    f << text;
    if (!f) throw IoError("failed writing " + path.string());
}

/// Inclusive range "1..8" or list "1,2,5".
std::vector<int> parse_points(const std::string& s) {
    std::vector<int> out;
    try {
        const auto dots = s.find("..");
        if (dots != std::string::npos) {
            const int lo = std::stoi(s.substr(0, dots)), hi = std::stoi(s.substr(dots + 2));
            if (hi < lo) throw ConfigError("empty range " + s);
            for (int v = lo; v <= hi; ++v) out.push_back(v);
            return out;
        }
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    } catch (const std::logic_error&) {
        throw ConfigError("cannot parse sweep points '" + s + "'");
    }
    if (out.empty()) throw ConfigError("no sweep points in '" + s + "'");
    return out;
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
    Common common;
    int b = 1;
    double alpha = 1.0;
    int n_features = 4;
    std::size_t n_train = 10000, n_val = 100, n_test = 100;
    std::string support_size = "uniform";
    int max_depth = kDefaultMaxDepth;
};

int cmd_gen(CLI::App* sub, GenArgs& a) {
    const RunConfig rc = run_config(sub, a.common);
    CorpusConfig cfg;
    cfg.output_dir = rc.output_dir;
    cfg.n_features = a.n_features;
    cfg.sampler.dirichlet_alpha = a.alpha;
    cfg.sampler.b = OutlierParam(a.b);
    cfg.sampler.max_depth = a.max_depth;
    if (a.support_size == "uniform") {
        cfg.sampler.support_size = SupportSizePolicy::uniform();
    } else {
        int n = 0;
        try {
            n = std::stoi(a.support_size);
        } catch (const std::logic_error&) {
            throw ConfigError("support-size must be 'uniform' or an integer");
        }
        cfg.sampler.support_size = SupportSizePolicy::exactly(n);
    }
    cfg.n_train = a.n_train;
    cfg.n_val = a.n_val;
    cfg.n_test = a.n_test;
    cfg.seed = rc.seed;
    cfg.overwrite = rc.overwrite;
    cfg.jobs = a.common.workers();
    const auto manifest = generate_corpus(cfg);
    write_config_snapshot(rc);
    std::cout << manifest.string() << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// rr

struct RRArgs {
    Common common;
    std::string benchmark_name;
    std::string examples;
    int n_features = 4;
    int b = 1;
    int blocks = 1;
    std::string method = "enum";
    std::uint64_t samples = 1'000'000;
    int max_literals = 6;
    double alpha = 1.0;
    bool unbounded = false;
};

std::vector<LabeledExample> read_examples(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read " + path);
    std::vector<LabeledExample> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(f, line)) {
        ++n;
        std::istringstream ss(line);
        std::string bits, label;
        if (!(ss >> bits) || bits[0] == '#') continue;
        if (!(ss >> label)) throw ParseError("expected '<bits> <A|B>'", n);
        if (label != "A" && label != "B" && label != "1" && label != "0")
            throw ParseError("label must be A, B, 1 or 0", n);
        try {
            out.push_back({Object::parse(bits), label == "A" || label == "1", false});
        } catch (const InvalidArgument& e) {
            throw ParseError(e.what(), n);
        }
    }
    if (out.empty()) throw ConfigError(path + " has no examples");
    return out;
}

int cmd_rr(CLI::App* sub, RRArgs& a) {
    const RunConfig rc = run_config(sub, a.common);
    if (a.benchmark_name.empty() == a.examples.empty())
        throw ConfigError("rr needs exactly one of --benchmark and --examples");
    RRConfig cfg;
    cfg.b = OutlierParam(a.b);
    cfg.dirichlet_alpha = a.alpha;
    cfg.method = a.method == "enum" ? InferenceMethod::enumeration : InferenceMethod::importance_sampling;
    cfg.n_samples = a.samples;
    cfg.max_literals = a.max_literals;
    cfg.restrict_samples = !a.unbounded;
    cfg.seed = rc.seed;
    cfg.jobs = a.common.workers();
    cfg.validate();
    if (a.blocks < 1) throw ConfigError("blocks must be at least 1");

    std::vector<BenchmarkConcept> concepts;
    int n_features = a.n_features;
    if (!a.benchmark_name.empty()) {
        const auto& table = benchmark(a.benchmark_name);
        concepts = table.concepts;
        n_features = table.n_features;
    } else {
        BenchmarkConcept c{"examples", read_examples(a.examples), {}, {}};
        n_features = c.training.front().object.n_features();
        for (const auto& o : all_objects(n_features)) c.tests.push_back({o.to_string(), o, std::nullopt, {}});
        concepts.push_back(std::move(c));
    }

    std::string csv = "concept,item,object,p_a\n", text;
    char buf[32];
    for (const auto& c : concepts) {
        const auto p = predict_with_rr(c, n_features, cfg, a.blocks);
        text += c.name + "\n";
        for (std::size_t i = 0; i < p.size(); ++i) {
            csv += csv_line({c.name, c.tests[i].label, c.tests[i].object.to_string(), format_double(p[i])}) + "\n";
            std::snprintf(buf, sizeof buf, "%.4f", p[i]);
            text += "  " + c.tests[i].label + "  " + c.tests[i].object.to_string() + "  " + buf + "\n";
        }
    }
    std::filesystem::create_directories(rc.output_dir);
    write_text(rc.output_dir / "rr.csv", csv, rc.overwrite);
    write_config_snapshot(rc);
    std::cout << (a.common.format == "csv" ? csv : text);
    return kOk;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
    Common common;
    std::string corpus;
    std::string arch = "baseline";
    int hidden = 0, depth = 0;
    double dropout = -1.0;
    std::string skip;
    double inner_lr = 0.1, outer_lr = 0.0005;
    int inner_epochs = 1, meta_batch = 16, passes = 100, patience = 5;
    bool first_order = false, full_batch_inner = false;
    std::string step_weights = "uniform", optimizer = "adam";
    std::size_t max_train = 0;
};

MLPConfig arch_config(const std::string& arch, int n_features) {
    if (arch == "baseline") return MLPConfig::baseline(n_features);
    if (arch == "modified") return MLPConfig::modified(n_features);
    throw ConfigError("unknown arch '" + arch + "' (expected baseline or modified)");
}

int cmd_train(CLI::App* sub, TrainArgs& a) {
    const RunConfig rc = run_config(sub, a.common);
    if (a.corpus.empty()) throw ConfigError("train needs --corpus");
    std::filesystem::path dir = a.corpus;
    const auto manifest_path = std::filesystem::is_directory(dir) ? dir / "manifest.json" : dir;
    const CorpusManifest manifest = read_manifest(manifest_path);
    const auto base = manifest_path.parent_path();

    MLPConfig mlp = arch_config(a.arch, manifest.n_features);
    if (a.hidden > 0) mlp.hidden = a.hidden;
    if (a.depth > 0) mlp.depth = a.depth;
    if (a.dropout >= 0.0) mlp.dropout_rate = a.dropout;
    if (!a.skip.empty()) {
        if (a.skip != "true" && a.skip != "false") throw ConfigError("skip must be true or false");
        mlp.skip_connections = a.skip == "true";
    }
    MetaConfig meta;
    meta.inner_lr = a.inner_lr;
    meta.outer_lr = a.outer_lr;
    meta.inner_epochs = a.inner_epochs;
    meta.meta_batch_size = a.meta_batch;
    meta.max_passes = a.passes;
    meta.patience = a.patience;
    meta.first_order = a.first_order;
    meta.full_batch_inner = a.full_batch_inner;
    meta.step_weights = parse_step_weights(a.step_weights);
    meta.optimizer = a.optimizer == "sgd" ? OuterOptimizer::sgd : OuterOptimizer::adam;
    meta.seed = rc.seed;
    meta.jobs = a.common.workers();
    try {
        mlp.validate();
        meta.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }

    auto train = read_corpus(base / manifest.train_file);
    const auto val = read_corpus(base / manifest.val_file);
    if (a.max_train > 0 && train.size() > a.max_train) train.resize(a.max_train);

    std::filesystem::create_directories(rc.output_dir);
    const auto ck_path = rc.output_dir / "checkpoint.rdck";
    const auto log_path = rc.output_dir / "train_log.txt";
    for (const auto& p : {ck_path, log_path})
        if (std::filesystem::exists(p) && !rc.overwrite)
            throw IoError(p.string() + " exists; pass --overwrite to replace it");
    write_config_snapshot(rc);

    std::ofstream log(log_path);
    if (!log) throw IoError("cannot write " + log_path.string());
    const auto start = std::chrono::steady_clock::now();
    auto result = meta_train(train, val, mlp, meta, manifest.digest(), [&](const PassLog& p) {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char line[160];
        std::snprintf(line, sizeof line, "pass=%d train_loss=%.6f val_loss=%.6f outer_steps=%llu seconds=%.1f",
                      p.pass, p.train_loss, p.val_loss, static_cast<unsigned long long>(p.outer_steps), secs);
        log << line << "\n" << std::flush;
        std::cerr << line << "\n";
    });
    result.checkpoint.corpus_b = manifest.b;
    save_checkpoint(ck_path, result.checkpoint);
    if (a.common.format == "csv") {
        std::cout << "checkpoint,passes,val_loss,outer_steps\n"
                  << csv_line({ck_path.string(), std::to_string(result.checkpoint.passes),
                               format_double(result.checkpoint.val_loss),
                               std::to_string(result.checkpoint.outer_steps)})
                  << "\n";
    } else {
        std::cout << ck_path.string() << " (best pass " << result.checkpoint.passes << ", val_loss "
                  << result.checkpoint.val_loss << ")\n";
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
    Common common;
    std::string experiment;
    std::vector<std::string> checkpoints;
    std::string sweep;
    int b = 0; // 0: the checkpoints' corpus b when they share one, else 1
    int epochs = 1;
    bool no_rr = false;
    std::size_t standard = 0;
    std::string standard_arch;
    std::size_t orderings = 1;
    double inner_lr = 0.0;
    bool pad_features = false;
    std::string rr_method = "enum";
    std::uint64_t rr_samples = 1'000'000;
    int rr_b = -1;
    bool no_plots = false;
};

// "PATH" or "B:PATH"; a directory means its checkpoint.rdck
std::pair<int, Checkpoint> load_tagged(const std::string& spec, int fallback_b) {
    int b = 0;
    std::string path = spec;
    const auto colon = spec.find(':');
    if (colon != std::string::npos && colon > 0 &&
        spec.find_first_not_of("0123456789") == colon) {
        b = std::stoi(spec.substr(0, colon));
        path = spec.substr(colon + 1);
    }
    std::filesystem::path p = path;
    if (std::filesystem::is_directory(p)) p /= "checkpoint.rdck";
    Checkpoint ck = load_checkpoint(p);
    if (b == 0) b = ck.corpus_b > 0 ? ck.corpus_b : fallback_b;
    return {b, std::move(ck)};
}

int cmd_eval(CLI::App* sub, EvalArgs& a) {
    const RunConfig rc = run_config(sub, a.common);
    if (a.experiment.empty()) throw ConfigError("eval needs --experiment");
    const BenchmarkTable& table = benchmark(a.experiment);
    ExperimentSpec spec;
    spec.experiment = a.experiment;
    spec.b = a.b > 0 ? a.b : 1;
    spec.epochs = a.epochs;
    if (!a.sweep.empty()) {
        const auto eq = a.sweep.find('=');
        if (eq == std::string::npos) throw ConfigError("sweep must look like b=1..8 or epochs=1..8");
        spec.axis = parse_sweep_axis(a.sweep.substr(0, eq));
        spec.points = parse_points(a.sweep.substr(eq + 1));
    }
    MLPConfig standard_mlp = arch_config(a.standard_arch.empty() ? "baseline" : a.standard_arch, table.n_features);
    MetaConfig standard_meta;
    for (const auto& c : a.checkpoints) {
        auto [b, ck] = load_tagged(c, spec.b);
        if (a.standard_arch.empty()) {
            standard_mlp = ck.mlp;
            standard_meta = ck.meta;
        }
        spec.prior_trained[b].push_back(std::move(ck));
    }
    if (a.b == 0 && spec.prior_trained.size() == 1) spec.b = spec.prior_trained.begin()->first;
    if (a.standard > 0) spec.standard = standard_networks(standard_mlp, standard_meta, a.standard, split_seed(rc.seed, 1));
    spec.rr = !a.no_rr;
    spec.rr_config.method = a.rr_method == "enum" ? InferenceMethod::enumeration : InferenceMethod::importance_sampling;
    spec.rr_config.n_samples = a.rr_samples;
    if (a.rr_b >= 0) spec.rr_b = a.rr_b;
    spec.rr_config.seed = split_seed(rc.seed, 2);
    spec.rr_config.jobs = a.common.workers();
    spec.adapt.orderings = a.orderings;
    spec.adapt.seed = split_seed(rc.seed, 3);
    spec.adapt.pad_features = a.pad_features;
    spec.adapt.jobs = a.common.workers();
    if (a.inner_lr > 0.0) spec.adapt.inner_lr = a.inner_lr;

    const auto summary_path = rc.output_dir / "summary.csv";
    if (std::filesystem::exists(summary_path) && !rc.overwrite)
        throw IoError(summary_path.string() + " exists; pass --overwrite to replace it");
    const EvalReport report = run_experiment(spec);
    write_report(report, rc.output_dir, !a.no_plots);
    write_config_snapshot(rc);
    std::cout << (a.common.format == "csv" ? summary_csv(report) : summary_text(report));
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rule-based concept learning: corpora, Rational Rules, meta-training, evaluation"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "sample an episode corpus");
    add_common(gen_cmd, gen.common, "corpus");
    gen_cmd->add_option("--b", gen.b, "outlier parameter")->check(CLI::NonNegativeNumber);
    gen_cmd->add_option("--alpha", gen.alpha, "Dirichlet concentration");
    gen_cmd->add_option("--n-features", gen.n_features, "binary features per object");
    gen_cmd->add_option("--n-train", gen.n_train, "training episodes");
    gen_cmd->add_option("--n-val", gen.n_val, "validation episodes");
    gen_cmd->add_option("--n-test", gen.n_test, "test episodes");
    gen_cmd->add_option("--support-size", gen.support_size, "'uniform' (1..20) or a fixed size");
    gen_cmd->add_option("--max-depth", gen.max_depth, "derivation depth cap");

    RRArgs rr;
    auto* rr_cmd = app.add_subcommand("rr", "Rational Rules posterior predictive");
    add_common(rr_cmd, rr.common, "rr-out");
    rr_cmd->add_option("--benchmark", rr.benchmark_name, "builtin benchmark");
    rr_cmd->add_option("--examples", rr.examples, "file of '<bits> <A|B>' lines");
    rr_cmd->add_option("--b", rr.b, "outlier parameter")->check(CLI::NonNegativeNumber);
    rr_cmd->add_option("--blocks", rr.blocks, "presentations of the examples");
    rr_cmd->add_option("--method", rr.method, "enum or is")->check(CLI::IsMember({"enum", "is"}));
    rr_cmd->add_option("--samples", rr.samples, "importance samples");
    rr_cmd->add_option("--max-literals", rr.max_literals, "literal bound of the hypothesis space");
    rr_cmd->add_option("--alpha", rr.alpha, "Dirichlet concentration");
    rr_cmd->add_flag("--unbounded", rr.unbounded, "importance sampling over every derivable formula");

    TrainArgs tr;
    auto* train_cmd = app.add_subcommand("train", "meta-train an initialization");
    add_common(train_cmd, tr.common, "train-out");
    train_cmd->add_option("--corpus", tr.corpus, "corpus directory or manifest (required)");
    train_cmd->add_option("--arch", tr.arch, "baseline or modified")->check(CLI::IsMember({"baseline", "modified"}));
    train_cmd->add_option("--hidden", tr.hidden, "override hidden width");
    train_cmd->add_option("--depth", tr.depth, "override number of linear layers");
    train_cmd->add_option("--dropout", tr.dropout, "override dropout rate");
    train_cmd->add_option("--skip", tr.skip, "override skip connections (true/false)");
    train_cmd->add_option("--inner-lr", tr.inner_lr, "inner learning rate");
    train_cmd->add_option("--outer-lr", tr.outer_lr, "outer learning rate");
    train_cmd->add_option("--inner-epochs", tr.inner_epochs, "inner epochs per episode");
    train_cmd->add_option("--meta-batch", tr.meta_batch, "episodes per outer step");
    train_cmd->add_option("--passes", tr.passes, "maximum passes over the corpus");
    train_cmd->add_option("--patience", tr.patience, "passes without validation improvement before stopping");
    train_cmd->add_flag("--first-order", tr.first_order, "first-order meta-gradient");
    train_cmd->add_flag("--full-batch-inner", tr.full_batch_inner, "one inner step per support set");
    train_cmd->add_option("--step-weights", tr.step_weights, "uniform, final-only or annealed");
    train_cmd->add_option("--optimizer", tr.optimizer, "adam or sgd")->check(CLI::IsMember({"adam", "sgd"}));
    train_cmd->add_option("--max-train", tr.max_train, "use only the first N training episodes (0 = all)");

    EvalArgs ev;
    auto* eval_cmd = app.add_subcommand("eval", "run a benchmark experiment");
    add_common(eval_cmd, ev.common, "eval-out");
    eval_cmd->add_option("--experiment", ev.experiment, "medin-schaffer, ls-nls, shj or medin82 (required)");
    eval_cmd->add_option("--checkpoint", ev.checkpoints, "prior-trained checkpoint, optionally B:PATH");
    eval_cmd->add_option("--sweep", ev.sweep, "b=1..8 or epochs=1..8");
    eval_cmd->add_option("--b", ev.b, "outlier parameter when b is not swept (0 = from the checkpoint)");
    eval_cmd->add_option("--epochs", ev.epochs, "adaptation epochs when epochs are not swept");
    eval_cmd->add_flag("--no-rr", ev.no_rr, "skip the Rational Rules predictor");
    eval_cmd->add_option("--standard", ev.standard, "number of random-init networks (0 = none)");
    eval_cmd->add_option("--standard-arch", ev.standard_arch, "architecture of the random-init networks");
    eval_cmd->add_option("--orderings", ev.orderings, "training orders per checkpoint");
    eval_cmd->add_option("--inner-lr", ev.inner_lr, "adaptation learning rate (0 = checkpoint's)");
    eval_cmd->add_flag("--pad-features", ev.pad_features, "pad benchmark objects to the network width");
    eval_cmd->add_option("--rr-method", ev.rr_method, "enum or is")->check(CLI::IsMember({"enum", "is"}));
    eval_cmd->add_option("--rr-samples", ev.rr_samples, "importance samples");
    eval_cmd->add_option("--rr-b", ev.rr_b, "fixed b for Rational Rules (-1 = the cell's b)");
    eval_cmd->add_flag("--no-plots", ev.no_plots, "skip SVG output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (gen_cmd->parsed()) return cmd_gen(gen_cmd, gen);
        if (rr_cmd->parsed()) return cmd_rr(rr_cmd, rr);
        if (train_cmd->parsed()) return cmd_train(train_cmd, tr);
        if (eval_cmd->parsed()) return cmd_eval(eval_cmd, ev);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kConfig;
    } catch (const NumericDivergence& e) {
        std::cerr << "numeric divergence: " << e.what() << "\n";
        return kDivergence;
    } catch (const InferenceDegenerate& e) {
        std::cerr << "inference degenerate: " << e.what() << "\n";
        return kDivergence;
    } catch (const SamplingDiverged& e) {
        std::cerr << "sampling diverged: " << e.what() << "\n";
        return kDivergence;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kIo;
    } catch (const DigestError& e) {
        std::cerr << "digest error: " << e.what() << "\n";
        return kIo;
    } catch (const IncompatibleVersion& e) {
        std::cerr << "incompatible file: " << e.what() << "\n";
        return kIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    }
    return kFailure;
}
