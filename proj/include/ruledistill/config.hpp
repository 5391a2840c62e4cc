#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace rd {

/// Ordered key/value pairs of a plain-text config file.
using KeyValues = std::map<std::string, std::string>;

/// One `key = value` per line; blank lines and lines starting with '#' are
/// ignored, surrounding whitespace is trimmed. Keys may not repeat. Throws
/// ConfigError with the line number on malformed input.
KeyValues parse_key_values(const std::string& text);
KeyValues load_key_values(const std::filesystem::path& path);
std::string format_key_values(const KeyValues& values);

/// Settings shared by every subcommand; `values` holds the resolved value of
/// every option (flag > file > default).
struct RunConfig {
    std::string subcommand;
    std::filesystem::path config_file;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir;
    bool overwrite = false;
    KeyValues values;
};

/// Writes `<output_dir>/<subcommand>.config`, which can be passed back with
/// --config to repeat the run. Returns its path.
std::filesystem::path write_config_snapshot(const RunConfig& config);

} // namespace rd
