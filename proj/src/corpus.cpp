#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ruledistill/digest.hpp"
#include "ruledistill/episode.hpp"
#include "ruledistill/errors.hpp"

namespace rd {

using nlohmann::json;
namespace fs = std::filesystem;

std::string episode_to_record(const Episode& ep) {
    json j;
    j["concept"] = ep.rule.to_string();
    j["b"] = ep.b.value();
    j["probs"] = ep.prob_table.rows();
    json support = json::array();
    for (const auto& s : ep.support) support.push_back({s.object.to_string(), s.label ? 1 : 0, s.flipped});
    j["support"] = std::move(support);
    json query = json::array();
    for (const auto& q : ep.query) query.push_back({q.object.to_string(), q.label ? 1 : 0});
    j["query"] = std::move(query);
    return j.dump();
}

namespace {

LabeledExample example_from_json(const json& item, int n, bool with_flag) {
    if (!item.is_array() || item.size() != (with_flag ? 3u : 2u)) throw InvalidArgument("malformed example entry");
    Object o = Object::parse(item.at(0).get<std::string>());
    if (o.n_features() != n) throw InvalidArgument("object " + o.to_string() + " has wrong feature count");
    const int label = item.at(1).get<int>();
    if (label != 0 && label != 1) throw InvalidArgument("label must be 0 or 1");
    return {o, label == 1, with_flag ? item.at(2).get<bool>() : false};
}

} // namespace

Episode episode_from_record(const std::string& line, std::size_t line_number, int n_features) {
    Episode ep;
    try {
        const json j = json::parse(line);
        ep.rule = Formula::parse(j.at("concept").get<std::string>());
        ep.b = OutlierParam(j.at("b").get<int>());
        ep.prob_table = ProbTable(j.at("probs").get<std::vector<std::vector<double>>>());
        for (const auto& s : j.at("support")) ep.support.push_back(example_from_json(s, n_features, true));
        for (const auto& q : j.at("query")) ep.query.push_back(example_from_json(q, n_features, false));
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed episode record: ") + e.what(), line_number);
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("malformed episode record: ") + e.what(), line_number);
    }
    try {
        ep.validate(n_features);
        ep.prob_table.check_compatible(default_grammar(n_features));
    } catch (const InvalidArgument& e) {
        throw InvariantViolation("line " + std::to_string(line_number) + ": " + e.what());
    } catch (const InvariantViolation& e) {
        throw InvariantViolation("line " + std::to_string(line_number) + ": " + e.what());
    }
    return ep;
}

void write_corpus(const fs::path& path, int n_features, const std::vector<Episode>& episodes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    json header = {{"format", kCorpusFormat}, {"n_features", n_features}, {"count", episodes.size()}};
    out << header.dump() << '\n';
    for (const auto& ep : episodes) out << episode_to_record(ep) << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

std::size_t read_corpus(const fs::path& path, const std::function<void(Episode&&)>& sink) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open corpus " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError("missing corpus header", 1);
    json header;
    try {
        header = json::parse(line);
    } catch (const json::exception&) {
        throw ParseError("corpus header is not valid JSON", 1);
    }
    const std::string format = header.value("format", "");
    if (format != kCorpusFormat)
        throw IncompatibleVersion("corpus format '" + format + "' is not " + kCorpusFormat);
    const int n = header.value("n_features", 0);
    const auto declared = header.value("count", std::size_t{0});
    if (n < 1 || n > kMaxFeatures) throw ParseError("corpus header has invalid n_features", 1);
    std::size_t line_number = 1, count = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) throw ParseError("empty record", line_number);
        sink(episode_from_record(line, line_number, n));
        ++count;
    }
    if (count != declared)
        throw ParseError("corpus declares " + std::to_string(declared) + " episodes but holds " + std::to_string(count),
                         line_number);
    return count;
}

std::vector<Episode> read_corpus(const fs::path& path) {
    std::vector<Episode> out;
    read_corpus(path, [&](Episode&& ep) { out.push_back(std::move(ep)); });
    return out;
}

std::string CorpusManifest::to_json() const {
    json j = {{"format", format},
              {"seed", seed},
              {"b", b},
              {"dirichlet_alpha", dirichlet_alpha},
              {"n_features", n_features},
              {"max_depth", max_depth},
              {"support_size", support_size},
              {"n_train", n_train},
              {"n_val", n_val},
              {"n_test", n_test},
              {"train_file", train_file},
              {"val_file", val_file},
              {"test_file", test_file},
              {"train_digest", train_digest},
              {"val_digest", val_digest},
              {"test_digest", test_digest}};
    return j.dump(2);
}

CorpusManifest CorpusManifest::from_json(const std::string& text) {
    CorpusManifest m;
    try {
        const json j = json::parse(text);
        m.format = j.at("format").get<std::string>();
        if (m.format != kCorpusFormat) throw IncompatibleVersion("manifest format '" + m.format + "' is not " + kCorpusFormat);
        m.seed = j.at("seed").get<std::uint64_t>();
        m.b = j.at("b").get<int>();
        m.dirichlet_alpha = j.at("dirichlet_alpha").get<double>();
        m.n_features = j.at("n_features").get<int>();
        m.max_depth = j.at("max_depth").get<int>();
        m.support_size = j.at("support_size").get<std::string>();
        m.n_train = j.at("n_train").get<std::size_t>();
        m.n_val = j.at("n_val").get<std::size_t>();
        m.n_test = j.at("n_test").get<std::size_t>();
        m.train_file = j.at("train_file").get<std::string>();
        m.val_file = j.at("val_file").get<std::string>();
        m.test_file = j.at("test_file").get<std::string>();
        m.train_digest = j.at("train_digest").get<std::string>();
        m.val_digest = j.at("val_digest").get<std::string>();
        m.test_digest = j.at("test_digest").get<std::string>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed manifest: ") + e.what(), 1);
    }
    return m;
}

std::string CorpusManifest::digest() const { return to_hex(sha256(to_json())); }

CorpusManifest read_manifest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return CorpusManifest::from_json(ss.str());
}

fs::path generate_corpus(const CorpusConfig& config) {
    if (config.n_train == 0 || config.n_val == 0 || config.n_test == 0)
        throw InvalidArgument("corpus split sizes must be positive");
    const Grammar grammar = default_grammar(config.n_features);
    const fs::path dir = config.output_dir;
    const fs::path manifest_path = dir / "manifest.json";
    CorpusManifest m;
    m.seed = config.seed;
    m.b = config.sampler.b.value();
    m.dirichlet_alpha = config.sampler.dirichlet_alpha;
    m.n_features = config.n_features;
    m.max_depth = config.sampler.max_depth;
    m.support_size = config.sampler.support_size.fixed ? std::to_string(config.sampler.support_size.size) : "uniform";
    m.n_train = config.n_train;
    m.n_val = config.n_val;
    m.n_test = config.n_test;
    m.train_file = "train.jsonl";
    m.val_file = "val.jsonl";
    m.test_file = "test.jsonl";

    for (const auto& name : {m.train_file, m.val_file, m.test_file, std::string("manifest.json")}) {
        if (fs::exists(dir / name) && !config.overwrite)
            throw IoError((dir / name).string() + " already exists; pass overwrite to replace it");
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    const std::pair<CorpusSplit, std::size_t> splits[] = {
        {CorpusSplit::train, config.n_train}, {CorpusSplit::val, config.n_val}, {CorpusSplit::test, config.n_test}};
    std::string* digests[] = {&m.train_digest, &m.val_digest, &m.test_digest};
    const std::string* names[] = {&m.train_file, &m.val_file, &m.test_file};
    for (int s = 0; s < 3; ++s) {
        auto episodes = sample_split(grammar, config.sampler, config.seed, splits[s].first, splits[s].second, config.jobs);
        const fs::path path = dir / *names[s];
        write_corpus(path, config.n_features, episodes);
        *digests[s] = file_digest(path);
    }
    std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + manifest_path.string());
    out << m.to_json() << '\n';
    if (!out) throw IoError("write failed for " + manifest_path.string());
    return manifest_path;
}

} // namespace rd
