#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "ruledistill/config.hpp"
#include "ruledistill/errors.hpp"

using namespace rd;
namespace fs = std::filesystem;

TEST_CASE("parse_key_values") {
    const KeyValues kv = parse_key_values("# comment\n  b = 3\n\nout=dir with spaces \nempty =\n");
    CHECK(kv.size() == 3);
    CHECK(kv.at("b") == "3");
    CHECK(kv.at("out") == "dir with spaces");
    CHECK(kv.at("empty").empty());
    CHECK(parse_key_values("expr = a=b\n").at("expr") == "a=b");
    CHECK(parse_key_values("").empty());
}

TEST_CASE("parse errors carry the line number") {
    auto message = [](const std::string& text) {
        try {
            parse_key_values(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("b = 1\nno equals sign\n").find("line 2") != std::string::npos);
    CHECK(message("= 5\n").find("empty key") != std::string::npos);
    CHECK(message("b = 1\n# x\nb = 2\n").find("line 3") != std::string::npos);
}

TEST_CASE("snapshot round trip") {
    const auto dir = fs::temp_directory_path() / "rd_test_config";
    fs::remove_all(dir);
    RunConfig c;
    c.subcommand = "rr";
    c.output_dir = dir;
    c.values = {{"b", "2"}, {"benchmark", "medin-schaffer"}, {"unbounded", "false"}};
    const auto path = write_config_snapshot(c);
    CHECK(path == dir / "rr.config");
    CHECK(load_key_values(path) == c.values);
    CHECK(parse_key_values(format_key_values(c.values)) == c.values);
    CHECK_THROWS_AS(load_key_values(dir / "missing.config"), IoError);
    fs::remove_all(dir);
}
