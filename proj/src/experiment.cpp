#include "ruledistill/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "ruledistill/csv.hpp"
#include "ruledistill/errors.hpp"
#include "ruledistill/parallel.hpp"
#include "ruledistill/plot.hpp"
#include "ruledistill/stats.hpp"

namespace rd {

namespace {

Object pad_object(const Object& o, int n_features) {
    const int extra = n_features - o.n_features();
    return Object(n_features, o.code() << extra);
}

int concept_features(const BenchmarkConcept& c) {
    if (c.tests.empty()) throw InvalidArgument("concept " + c.name + " has no test objects");
    return c.tests.front().object.n_features();
}

} // namespace

NetworkPrediction predict_with_network(const std::vector<Checkpoint>& checkpoints, const BenchmarkConcept& structure,
                                       const AdaptOptions& options) {
    if (checkpoints.empty()) throw InvalidArgument("no checkpoints to predict with");
    if (options.epochs < 0) throw InvalidArgument("epochs must be non-negative");
    if (options.orderings < 1) throw InvalidArgument("orderings must be at least 1");
    const int n = concept_features(structure);

    const std::size_t runs = checkpoints.size() * options.orderings;
    NetworkPrediction out;
    out.per_run.resize(runs);
    parallel_for(runs, options.jobs, [&](std::size_t run) {
        const auto& ck = checkpoints[run / options.orderings];
        const std::size_t order = run % options.orderings;
        const int width = ck.mlp.input_dim;
        if (width != n && !(options.pad_features && width > n))
            throw InvalidArgument("checkpoint expects " + std::to_string(width) + " features but concept " +
                                  structure.name + " has " + std::to_string(n));

        auto support = structure.training;
        for (auto& ex : support) ex.object = pad_object(ex.object, width);
        if (order > 0) {
            Rng rng = Rng::stream(options.seed, run);
            rng.shuffle(std::span<LabeledExample>(support));
        }
        std::vector<Object> objects;
        for (const auto& t : structure.tests) objects.push_back(pad_object(t.object, width));

        const double lr = options.inner_lr.value_or(ck.meta.inner_lr);
        const ParamSet adapted = adapt(ck.params, ck.mlp, support, options.epochs, lr);
        const Tensor p = forward(adapted, ck.mlp, encode_objects(objects, width), Mode::eval);
        out.per_run[run] = p.data();
    });

    const std::size_t m = structure.tests.size();
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> v;
        for (const auto& r : out.per_run) v.push_back(r[i]);
        out.mean.push_back(mean(v));
        out.sd.push_back(stddev(v));
    }
    return out;
}

std::vector<Checkpoint> standard_networks(const MLPConfig& mlp, const MetaConfig& meta, std::size_t count,
                                          std::uint64_t seed) {
    std::vector<Checkpoint> out;
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng = Rng::stream(seed, i);
        out.push_back(Checkpoint{mlp, meta, init_params(mlp, rng), "", 0, 0, 0.0});
    }
    return out;
}

std::vector<double> predict_with_rr(const BenchmarkConcept& structure, int n_features, const RRConfig& config,
                                    int blocks) {
    const Grammar grammar = default_grammar(n_features);
    const auto post = blocks == 1 ? posterior_predictive(grammar, structure.training, config)
                                  : predict_blocks(grammar, structure.training, blocks, config);
    std::vector<double> out;
    for (const auto& t : structure.tests) out.push_back(post.at(t.object));
    return out;
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::none: return "none";
    case SweepAxis::b: return "b";
    case SweepAxis::epochs: return "epochs";
    }
    return "?";
}

SweepAxis parse_sweep_axis(const std::string& s) {
    if (s == "none") return SweepAxis::none;
    if (s == "b") return SweepAxis::b;
    if (s == "epochs") return SweepAxis::epochs;
    throw ConfigError("unknown sweep axis '" + s + "' (expected none, b or epochs)");
}

std::optional<double> EvalReport::find(const std::string& predictor, int b, int epochs,
                                       const std::string& concept_name, const std::string& statistic,
                                       const std::string& reference) const {
    for (const auto& r : summary)
        if (r.predictor == predictor && r.b == b && r.epochs == epochs && r.concept_name == concept_name &&
            r.statistic == statistic && r.reference == reference)
            return r.value;
    return std::nullopt;
}

std::vector<double> EvalReport::predictions_for(const std::string& predictor, int b, int epochs,
                                                const std::string& concept_name) const {
    std::vector<double> out;
    for (const auto& r : predictions)
        if (r.predictor == predictor && r.b == b && r.epochs == epochs && r.concept_name == concept_name)
            out.push_back(r.p_a);
    return out;
}

namespace {

struct Cell {
    int b, epochs;
};

std::vector<Cell> cells_of(const ExperimentSpec& spec) {
    if (spec.axis == SweepAxis::none) return {{spec.b, spec.epochs}};
    if (spec.points.empty()) throw ConfigError("sweep over " + to_string(spec.axis) + " has no points");
    std::vector<Cell> out;
    for (int p : spec.points) {
        if (spec.axis == SweepAxis::b) out.push_back({p, spec.epochs});
        else out.push_back({spec.b, p});
    }
    return out;
}

void add_statistics(EvalReport& report, const BenchmarkConcept& c, const std::string& predictor, const Cell& cell,
                    const std::vector<double>& p, const std::vector<double>* rr) {
    for (const auto& column : c.columns) {
        const auto r2 = try_r_squared(p, c.column_values(column));
        if (r2) report.summary.push_back({predictor, cell.b, cell.epochs, c.name, "r2", column, *r2});
        else
            report.notes.push_back(predictor + " b=" + std::to_string(cell.b) + " N=" + std::to_string(cell.epochs) +
                                   " " + c.name + ": R^2 vs " + column + " undefined (constant predictions)");
    }
    if (rr && predictor != "rr") {
        if (const auto r2 = try_r_squared(p, *rr))
            report.summary.push_back({predictor, cell.b, cell.epochs, c.name, "r2", "rr_model", *r2});
    }
    std::vector<double> labelled;
    std::vector<bool> truth;
    for (std::size_t i = 0; i < c.tests.size(); ++i)
        if (c.tests[i].truth) {
            labelled.push_back(p[i]);
            truth.push_back(*c.tests[i].truth);
        }
    if (!labelled.empty())
        report.summary.push_back(
            {predictor, cell.b, cell.epochs, c.name, "error", "truth", error_probability(labelled, truth)});
}

void add_ranks(EvalReport& report, const BenchmarkTable& table, const std::string& predictor, const Cell& cell) {
    if (table.concepts.size() < 2) return;
    std::vector<std::pair<double, std::string>> errors;
    for (const auto& c : table.concepts) {
        const auto e = report.find(predictor, cell.b, cell.epochs, c.name, "error", "truth");
        if (!e) return;
        errors.emplace_back(*e, c.name);
    }
    std::stable_sort(errors.begin(), errors.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t k = 0; k < errors.size(); ++k)
        report.summary.push_back(
            {predictor, cell.b, cell.epochs, errors[k].second, "rank", "error", static_cast<double>(k + 1)});
}

void add_predictions(EvalReport& report, const BenchmarkConcept& c, const std::string& predictor, const Cell& cell,
                     const std::vector<double>& p, const NetworkPrediction* net) {
    for (std::size_t i = 0; i < c.tests.size(); ++i) {
        PredictionRow row{predictor, cell.b, cell.epochs, c.name, c.tests[i].label, c.tests[i].object,
                          c.tests[i].truth, p[i], 0.0, {}};
        if (net) {
            row.sd = net->sd[i];
            for (const auto& run : net->per_run) row.per_run.push_back(run[i]);
        }
        report.predictions.push_back(std::move(row));
    }
}

} // namespace

EvalReport run_experiment(const ExperimentSpec& spec) {
    const BenchmarkTable& table = benchmark(spec.experiment);
    const auto cells = cells_of(spec);
    EvalReport report{spec.experiment, spec.axis, spec.axis == SweepAxis::none ? std::vector<int>{} : spec.points,
                      {}, {}, {}};

    if (!spec.prior_trained.empty())
        for (const auto& cell : cells)
            if (!spec.prior_trained.contains(cell.b) || spec.prior_trained.at(cell.b).empty())
                throw ConfigError("no prior-trained checkpoint for b=" + std::to_string(cell.b));

    for (const auto& cell : cells) {
        std::map<std::string, std::vector<double>> rr_by_concept;
        if (spec.rr) {
            RRConfig config = spec.rr_config;
            config.b = OutlierParam(spec.rr_b.value_or(cell.b));
            for (const auto& c : table.concepts) {
                auto p = predict_with_rr(c, table.n_features, config, cell.epochs);
                add_predictions(report, c, "rr", cell, p, nullptr);
                add_statistics(report, c, "rr", cell, p, nullptr);
                rr_by_concept[c.name] = std::move(p);
            }
            add_ranks(report, table, "rr", cell);
        }

        const auto run_network = [&](const std::string& name, const std::vector<Checkpoint>& checkpoints) {
            AdaptOptions options = spec.adapt;
            options.epochs = cell.epochs;
            for (const auto& c : table.concepts) {
                const auto net = predict_with_network(checkpoints, c, options);
                const auto rr = rr_by_concept.find(c.name);
                add_predictions(report, c, name, cell, net.mean, &net);
                add_statistics(report, c, name, cell, net.mean, rr == rr_by_concept.end() ? nullptr : &rr->second);
            }
            add_ranks(report, table, name, cell);
        };
        if (!spec.prior_trained.empty()) run_network("prior_trained", spec.prior_trained.at(cell.b));
        if (!spec.standard.empty()) run_network("standard", spec.standard);
    }

    if (!spec.output_dir.empty()) write_report(report, spec.output_dir, spec.plots);
    return report;
}

std::string predictions_csv(const EvalReport& report) {
    std::string out = "experiment,predictor,b,epochs,concept,item,object,truth,p_a,sd,runs\n";
    for (const auto& r : report.predictions) {
        out += csv_line({report.experiment, r.predictor, std::to_string(r.b), std::to_string(r.epochs),
                         r.concept_name, r.item, r.object.to_string(), r.truth ? (*r.truth ? "A" : "B") : "",
                         format_double(r.p_a), format_double(r.sd), std::to_string(r.per_run.size())});
        out += '\n';
    }
    return out;
}

std::string per_run_csv(const EvalReport& report) {
    std::string out = "experiment,predictor,b,epochs,concept,item,run,p_a\n";
    for (const auto& r : report.predictions)
        for (std::size_t k = 0; k < r.per_run.size(); ++k) {
            out += csv_line({report.experiment, r.predictor, std::to_string(r.b), std::to_string(r.epochs),
                             r.concept_name, r.item, std::to_string(k), format_double(r.per_run[k])});
            out += '\n';
        }
    return out;
}

std::string summary_csv(const EvalReport& report) {
    std::string out = "experiment,predictor,b,epochs,concept,statistic,reference,value\n";
    for (const auto& r : report.summary) {
        out += csv_line({report.experiment, r.predictor, std::to_string(r.b), std::to_string(r.epochs),
                         r.concept_name, r.statistic, r.reference, format_double(r.value)});
        out += '\n';
    }
    return out;
}

std::string summary_text(const EvalReport& report) {
    std::string out = "experiment " + report.experiment + " (sweep " + to_string(report.axis) + ")\n";
    char buf[64];
    for (const auto& r : report.summary) {
        std::snprintf(buf, sizeof buf, "%.4f", r.value);
        out += "  " + r.predictor + " b=" + std::to_string(r.b) + " N=" + std::to_string(r.epochs) + " " +
               r.concept_name + " " + r.statistic + (r.reference.empty() ? "" : "[" + r.reference + "]") + " = " +
               buf + "\n";
    }
    for (const auto& n : report.notes) out += "  note: " + n + "\n";
    return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path.string());
    f << text;
    if (!f) throw IoError("failed writing " + path.string());
}

std::vector<std::string> predictors_of(const EvalReport& report) {
    std::vector<std::string> out;
    for (const auto& r : report.predictions)
        if (std::find(out.begin(), out.end(), r.predictor) == out.end()) out.push_back(r.predictor);
    return out;
}

} // namespace

std::vector<std::filesystem::path> write_report(const EvalReport& report, const std::filesystem::path& dir,
                                                bool plots) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    const auto put = [&](const std::string& name, const std::string& text) {
        write_file(dir / name, text);
        written.push_back(dir / name);
    };
    put("predictions.csv", predictions_csv(report));
    put("per_run.csv", per_run_csv(report));
    put("summary.csv", summary_csv(report));
    put("reference.csv", reference_csv(benchmark(report.experiment)));
    if (!plots) return written;

    const BenchmarkTable& table = benchmark(report.experiment);
    for (const auto& predictor : predictors_of(report)) {
        // predictions against each human column, one plot per cell
        std::map<std::pair<int, int>, bool> seen;
        for (const auto& r : report.predictions) {
            if (r.predictor != predictor || seen[{r.b, r.epochs}]) continue;
            seen[{r.b, r.epochs}] = true;
            for (const auto& c : table.concepts)
                for (const auto& column : c.columns) {
                    if (column.rfind("human", 0) != 0) continue;
                    Series s{c.name, c.column_values(column), report.predictions_for(predictor, r.b, r.epochs, c.name),
                             {}};
                    for (const auto& t : c.tests) s.labels.push_back(t.label);
                    const std::string cell = "b" + std::to_string(r.b) + "_n" + std::to_string(r.epochs);
                    put("scatter_" + predictor + "_" + cell + "_" + column + ".svg",
                        svg_scatter(predictor + " vs " + column + " (b=" + std::to_string(r.b) +
                                        ", N=" + std::to_string(r.epochs) + ")",
                                    column, predictor + " P(A)", {s}));
                }
        }
        // error against the sweep axis
        if (report.axis == SweepAxis::none) continue;
        std::vector<Series> lines;
        for (const auto& c : table.concepts) {
            Series s{c.name, {}, {}, {}};
            for (const auto& row : report.summary)
                if (row.predictor == predictor && row.concept_name == c.name && row.statistic == "error") {
                    s.x.push_back(report.axis == SweepAxis::b ? row.b : row.epochs);
                    s.y.push_back(row.value);
                }
            if (!s.x.empty()) lines.push_back(std::move(s));
        }
        if (!lines.empty())
            put("error_" + predictor + ".svg",
                svg_lines(predictor + " error probability", to_string(report.axis), "error probability", lines));
    }
    return written;
}

} // namespace rd
