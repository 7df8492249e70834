#include "randgreedy/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace randgreedy {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string canonical(const RunConfig::Key& key, const std::string& value) {
    const std::string v = trim(value);
    auto bad = [&] {
        return std::invalid_argument("config key '" + key.name + "': invalid value '" + value + "'");
    };
    switch (key.type) {
        case RunConfig::Type::integer: {
            std::size_t used = 0;
            long long x = 0;
            try {
                x = std::stoll(v, &used);
            } catch (const std::logic_error&) {
                throw bad();
            }
            if (used != v.size()) throw bad();
            return std::to_string(x);
        }
        case RunConfig::Type::real: {
            std::size_t used = 0;
            double x = 0;
            try {
                x = std::stod(v, &used);
            } catch (const std::logic_error&) {
                throw bad();
            }
            if (used != v.size()) throw bad();
            return nlohmann::json(x).dump();
        }
        case RunConfig::Type::boolean:
            if (v == "true" || v == "1" || v == "yes") return "true";
            if (v == "false" || v == "0" || v == "no") return "false";
            throw bad();
        case RunConfig::Type::text:
            return v;
    }
    throw bad();
}

const RunConfig::Key& lookup(const std::string& name) {
    const auto& keys = RunConfig::keys();
    auto it = std::find_if(keys.begin(), keys.end(), [&](const RunConfig::Key& k) { return k.name == name; });
    if (it == keys.end()) throw std::invalid_argument("unknown config key '" + name + "'");
    return *it;
}

}  // namespace

const std::vector<RunConfig::Key>& RunConfig::keys() {
    using T = RunConfig::Type;
    static const std::vector<Key> table = {
        {"seed", T::integer, "1", "run seed; repeated runs use seed, seed+1, ..."},
        {"repeat", T::integer, "1", "number of runs"},
        {"jobs", T::integer, "1", "worker threads for repeated runs"},
        {"output_dir", T::text, ".", "directory for output files"},
        {"format", T::text, "json", "summary format: json or csv"},
        {"N", T::integer, "1009", "prime modulus of the AP-free process"},
        {"r", T::integer, "3", "AP length"},
        {"xi", T::real, "0.2", "trajectory constant"},
        {"delta", T::real, "0.1", "error exponent"},
        {"mode", T::text, "desk", "parameter mode: desk or paper"},
        {"checkpoint_every", T::integer, "1", "steps between trajectory checkpoints"},
        {"tracked_k", T::integer, "32", "number of tracked k-APs"},
        {"sampled_v", T::integer, "64", "available residues sampled per checkpoint"},
        {"monitor", T::boolean, "true", "record trajectory checkpoints"},
        {"hitting_samples", T::integer, "10000", "sampled k-APs for hitting checks"},
        {"k", T::integer, "0", "AP length for hitting / blue APs (0 = derived)"},
        {"C", T::real, "0", "constant of k_N (0 = default)"},
        {"N0", T::integer, "2", "lower bound for the selected modulus"},
        {"nmax", T::integer, "40", "search bound for exact van der Waerden numbers"},
        {"n", T::integer, "4096", "vertex count of the triangle-free process / witness"},
        {"beta", T::real, "0.05", "exponent of the step count n^beta"},
        {"event_samples", T::integer, "10000", "sampled pairs per pseudo-random event"},
        {"check_triangles", T::boolean, "true", "exact triangle scan after every step"},
        {"d", T::integer, "0", "minimum degree of the g(n,d) witness"},
        {"gnd_mode", T::text, "paper", "witness constants: paper or measured"},
        {"gnd_source", T::text, "trifree", "G_{n'} source: trifree or cayley"},
        {"cayley_c0", T::real, "20", "degree constant of the Cayley source"},
        {"heuristic_tries", T::integer, "4", "restarts of the bipartite heuristic"},
    };
    return table;
}

bool RunConfig::known(const std::string& name) {
    const auto& k = keys();
    return std::any_of(k.begin(), k.end(), [&](const Key& key) { return key.name == name; });
}

RunConfig::RunConfig() {
    for (const Key& key : keys()) values_[key.name] = canonical(key, key.default_value);
}

void RunConfig::set(const std::string& name, const std::string& value) {
    values_[name] = canonical(lookup(name), value);
}

const std::string& RunConfig::raw(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw std::invalid_argument("unknown config key '" + name + "'");
    return it->second;
}

std::int64_t RunConfig::get_int(const std::string& name) const {
    if (lookup(name).type != Type::integer) throw std::invalid_argument("config key '" + name + "' is not an integer");
    return std::stoll(raw(name));
}

std::uint64_t RunConfig::get_uint(const std::string& name) const {
    const std::int64_t v = get_int(name);
    if (v < 0) throw std::invalid_argument("config key '" + name + "' must be non-negative");
    return static_cast<std::uint64_t>(v);
}

double RunConfig::get_double(const std::string& name) const {
    const Type t = lookup(name).type;
    if (t != Type::real && t != Type::integer) throw std::invalid_argument("config key '" + name + "' is not numeric");
    return std::stod(raw(name));
}

bool RunConfig::get_bool(const std::string& name) const {
    if (lookup(name).type != Type::boolean) throw std::invalid_argument("config key '" + name + "' is not a boolean");
    return raw(name) == "true";
}

const std::string& RunConfig::get_string(const std::string& name) const {
    lookup(name);
    return raw(name);
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const Key& key : keys()) {
        switch (key.type) {
            case Type::integer: j[key.name] = get_int(key.name); break;
            case Type::real: j[key.name] = get_double(key.name); break;
            case Type::boolean: j[key.name] = get_bool(key.name); break;
            case Type::text: j[key.name] = get_string(key.name); break;
        }
    }
    return j;
}

std::string RunConfig::to_text() const {
    std::ostringstream out;
    for (const Key& key : keys()) out << key.name << '=' << raw(key.name) << '\n';
    return out.str();
}

RunConfig load_config_text(const std::string& text, RunConfig base) {
    std::istringstream in(text);
    std::string line;
    std::uint64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
        }
        try {
            base.set(trim(t.substr(0, eq)), t.substr(eq + 1));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_config_text(buffer.str(), std::move(base));
}

}  // namespace randgreedy
