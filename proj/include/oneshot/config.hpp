#pragma once

// Experiment configuration (TOML subset), the batch experiment runner, and
// the named-check registry used for failure messages and --list-anchors.
//
// Supported TOML subset: [section] headers (dotted names allowed), key =
// value with strings, numbers, booleans, flat arrays and one level of array
// nesting (matrices), and # comments.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace oneshot::config {

struct TomlValue {
    enum class Kind { String, Number, Boolean, Array };
    Kind kind = Kind::Number;
    std::string str;
    double num = 0;
    bool boolean = false;
    std::vector<TomlValue> arr;

    double as_number() const;
    bool as_bool() const;
    const std::string& as_string() const;
    std::vector<double> as_number_array() const;
    std::vector<std::vector<double>> as_matrix() const;
};

struct TomlDoc {
    // section "" is the root table
    std::map<std::string, std::map<std::string, TomlValue>> sections;

    bool has(const std::string& section, const std::string& key) const;
    const TomlValue& get(const std::string& section, const std::string& key) const;
    double number_or(const std::string& section, const std::string& key, double fallback) const;
    std::string string_or(const std::string& section, const std::string& key,
                          std::string fallback) const;
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

TomlDoc parse_toml(const std::string& text);
TomlDoc parse_toml_file(const std::string& path);

// ── Experiment runner ────────────────────────────────────────────────────────
struct RunOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;  // overrides the config seed
    std::string out_dir = ".";
    int jobs = 1;
};

// Exit codes: 0 pass, 1 invariant failure, 2 usage/config error.
int run_experiment(const RunOptions& options, std::string* log = nullptr);

// named checks: anchor → one-line description
const std::vector<std::pair<std::string, std::string>>& check_anchors();

}  // namespace oneshot::config
