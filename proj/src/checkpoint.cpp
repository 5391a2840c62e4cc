#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ruledistill/digest.hpp"
#include "ruledistill/errors.hpp"
#include "ruledistill/maml.hpp"

namespace rd {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "checkpoint encoding assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'R', 'D', 'C', 'K', 'P', 'T', '\r', '\n'};

template <class T>
void put(std::string& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    template <class T>
    T get() {
        need(sizeof(T));
        T v;
        std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }

    std::string_view take(std::size_t n) {
        need(n);
        auto s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    bool done() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) throw DigestError("checkpoint is truncated");
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

json header_json(const Checkpoint& c) {
    const auto& m = c.meta;
    return {{"mlp",
             {{"input_dim", c.mlp.input_dim},
              {"depth", c.mlp.depth},
              {"hidden", c.mlp.hidden},
              {"dropout_rate", c.mlp.dropout_rate},
              {"skip_connections", c.mlp.skip_connections}}},
            {"meta",
             {{"inner_lr", m.inner_lr},
              {"outer_lr", m.outer_lr},
              {"inner_epochs", m.inner_epochs},
              {"meta_batch_size", m.meta_batch_size},
              {"max_passes", m.max_passes},
              {"patience", m.patience},
              {"first_order", m.first_order},
              {"step_weights", to_string(m.step_weights)},
              {"full_batch_inner", m.full_batch_inner},
              {"optimizer", m.optimizer == OuterOptimizer::adam ? "adam" : "sgd"},
              {"adam_beta1", m.adam_beta1},
              {"adam_beta2", m.adam_beta2},
              {"adam_epsilon", m.adam_epsilon},
              {"seed", m.seed},
              {"jobs", m.jobs}}},
            {"manifest_digest", c.manifest_digest},
            {"outer_steps", c.outer_steps},
            {"passes", c.passes},
            {"val_loss", c.val_loss},
            {"corpus_b", c.corpus_b}};
}

void header_from_json(const json& j, Checkpoint& c) {
    const auto& a = j.at("mlp");
    c.mlp.input_dim = a.at("input_dim").get<int>();
    c.mlp.depth = a.at("depth").get<int>();
    c.mlp.hidden = a.at("hidden").get<int>();
    c.mlp.dropout_rate = a.at("dropout_rate").get<double>();
    c.mlp.skip_connections = a.at("skip_connections").get<bool>();
    const auto& m = j.at("meta");
    c.meta.inner_lr = m.at("inner_lr").get<double>();
    c.meta.outer_lr = m.at("outer_lr").get<double>();
    c.meta.inner_epochs = m.at("inner_epochs").get<int>();
    c.meta.meta_batch_size = m.at("meta_batch_size").get<int>();
    c.meta.max_passes = m.at("max_passes").get<int>();
    c.meta.patience = m.at("patience").get<int>();
    c.meta.first_order = m.at("first_order").get<bool>();
    c.meta.step_weights = parse_step_weights(m.at("step_weights").get<std::string>());
    c.meta.full_batch_inner = m.at("full_batch_inner").get<bool>();
    c.meta.optimizer = m.at("optimizer").get<std::string>() == "sgd" ? OuterOptimizer::sgd : OuterOptimizer::adam;
    c.meta.adam_beta1 = m.at("adam_beta1").get<double>();
    c.meta.adam_beta2 = m.at("adam_beta2").get<double>();
    c.meta.adam_epsilon = m.at("adam_epsilon").get<double>();
    c.meta.seed = m.at("seed").get<std::uint64_t>();
    c.meta.jobs = m.at("jobs").get<int>();
    c.manifest_digest = j.at("manifest_digest").get<std::string>();
    c.outer_steps = j.at("outer_steps").get<std::uint64_t>();
    c.passes = j.at("passes").get<int>();
    c.val_loss = j.at("val_loss").get<double>();
    c.corpus_b = j.value("corpus_b", 0);
}

} // namespace

std::string serialize_checkpoint(const Checkpoint& c) {
    check_params(c.params, c.mlp);
    std::string out(kMagic, sizeof(kMagic));
    put<std::uint32_t>(out, kCheckpointVersion);
    const std::string header = header_json(c).dump();
    put<std::uint64_t>(out, header.size());
    out += header;
    put<std::uint64_t>(out, c.params.size());
    for (const auto& t : c.params) {
        put<std::uint64_t>(out, t.shape().size());
        for (auto d : t.shape()) put<std::uint64_t>(out, d);
        for (double v : t.data()) put<double>(out, v);
    }
    const Sha256 digest = sha256(out);
    out.append(reinterpret_cast<const char*>(digest.data()), digest.size());
    return out;
}

Checkpoint parse_checkpoint(const std::string& bytes) {
    const std::size_t trailer = std::tuple_size_v<Sha256>;
    if (bytes.size() < sizeof(kMagic) + 4 + trailer || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
        throw DigestError("not a checkpoint file");
    const std::string_view body(bytes.data(), bytes.size() - trailer);
    const Sha256 expected = sha256(body);
    if (std::memcmp(expected.data(), bytes.data() + body.size(), trailer) != 0)
        throw DigestError("checkpoint digest mismatch; the file is corrupted");

    Reader r(body);
    r.take(sizeof(kMagic));
    const auto version = r.get<std::uint32_t>();
    if (version != kCheckpointVersion)
        throw IncompatibleVersion("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                                  std::to_string(kCheckpointVersion) + ")");
    Checkpoint c;
    const auto header_len = r.get<std::uint64_t>();
    try {
        header_from_json(json::parse(r.take(header_len)), c);
    } catch (const json::exception& e) {
        throw DigestError(std::string("checkpoint header is malformed: ") + e.what());
    }
    const auto n = r.get<std::uint64_t>();
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto rank = r.get<std::uint64_t>();
        std::vector<std::size_t> shape;
        std::size_t size = 1;
        for (std::uint64_t d = 0; d < rank; ++d) {
            shape.push_back(r.get<std::uint64_t>());
            size *= shape.back();
        }
        std::vector<double> data(size);
        for (auto& v : data) v = r.get<double>();
        c.params.emplace_back(Shape(shape), std::move(data));
    }
    if (!r.done()) throw DigestError("checkpoint has trailing bytes");
    try {
        check_params(c.params, c.mlp);
    } catch (const InvalidArgument& e) {
        throw IncompatibleVersion(std::string("checkpoint parameters do not match its config: ") + e.what());
    }
    return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
    const std::string bytes = serialize_checkpoint(checkpoint);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path, const MLPConfig* expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    Checkpoint c = parse_checkpoint(ss.str());
    if (expected && !(*expected == c.mlp))
        throw IncompatibleVersion("checkpoint network (" + c.mlp.to_string() + ") does not match the requested (" +
                                  expected->to_string() + ")");
    return c;
}

} // namespace rd
