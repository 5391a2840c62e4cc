#include "ruledistill/config.hpp"

#include <fstream>
#include <sstream>

#include "ruledistill/errors.hpp"

namespace rd {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

KeyValues parse_key_values(const std::string& text) {
    KeyValues out;
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(n) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw ConfigError("config line " + std::to_string(n) + ": empty key");
        if (!out.emplace(key, trim(t.substr(eq + 1))).second)
            throw ConfigError("config line " + std::to_string(n) + ": duplicate key '" + key + "'");
    }
    return out;
}

KeyValues load_key_values(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_key_values(ss.str());
}

std::string format_key_values(const KeyValues& values) {
    std::string out;
    for (const auto& [k, v] : values) out += k + " = " + v + "\n";
    return out;
}

std::filesystem::path write_config_snapshot(const RunConfig& config) {
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw IoError("cannot create " + config.output_dir.string() + ": " + ec.message());
    const auto path = config.output_dir / (config.subcommand + ".config");
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path.string());
    f << "# resolved " << config.subcommand << " settings\n" << format_key_values(config.values);
    if (!f) throw IoError("failed writing " + path.string());
    return path;
}

} // namespace rd
