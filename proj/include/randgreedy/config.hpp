#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace randgreedy {

/// Effective run configuration: a fixed table of typed keys with defaults.
/// Values come from defaults, then a key=value file, then command-line flags.
class RunConfig {
public:
    enum class Type { integer, real, boolean, text };

    struct Key {
        std::string name;
        Type type;
        std::string default_value;
        std::string help;
    };

    RunConfig();

    static const std::vector<Key>& keys();
    static bool known(const std::string& name);

    /// Throws std::invalid_argument for unknown keys or values of the wrong type.
    void set(const std::string& name, const std::string& value);

    std::int64_t get_int(const std::string& name) const;
    std::uint64_t get_uint(const std::string& name) const;
    double get_double(const std::string& name) const;
    bool get_bool(const std::string& name) const;
    const std::string& get_string(const std::string& name) const;

    /// Every key with its typed value.
    nlohmann::json to_json() const;
    /// key=value lines in key order; load_config_text of this reproduces *this.
    std::string to_text() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;

private:
    const std::string& raw(const std::string& name) const;
    std::map<std::string, std::string> values_;
};

/// Parses flat "key = value" text; blank lines and lines starting with '#'
/// are skipped. Errors carry the line number.
RunConfig load_config_text(const std::string& text, RunConfig base = RunConfig{});
RunConfig load_config(const std::string& path, RunConfig base = RunConfig{});

}  // namespace randgreedy
