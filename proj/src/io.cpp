#include "randgreedy/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace randgreedy {

nlohmann::json output_header(const std::string& kind, const RunConfig& cfg, std::uint64_t seed,
                             const nlohmann::json& modes) {
    return nlohmann::json{{"type", "header"},
                          {"artifact", kArtifactName},
                          {"version", kVersion},
                          {"kind", kind},
                          {"config", cfg.to_json()},
                          {"seed", seed},
                          {"modes", modes}};
}

void write_residues(std::ostream& out, std::span<const Residue> I, const nlohmann::json& header) {
    out << "# " << header.dump() << '\n';
    for (Residue x : I) out << x << '\n';
}

ResidueFile read_residues(std::istream& in) {
    ResidueFile file;
    file.header = nlohmann::json::object();
    std::string line;
    std::uint64_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            const auto brace = line.find('{');
            if (!header_seen && brace != std::string::npos) {
                try {
                    file.header = nlohmann::json::parse(line.substr(brace));
                } catch (const nlohmann::json::exception& e) {
                    throw std::runtime_error("line " + std::to_string(lineno) + ": bad header JSON: " + e.what());
                }
                header_seen = true;
            }
            continue;
        }
        const auto last = line.find_last_not_of(" \t");
        const std::string token = line.substr(first, last - first + 1);
        std::size_t used = 0;
        unsigned long long x = 0;
        try {
            if (token[0] == '-' || token[0] == '+') throw std::invalid_argument("sign");
            x = std::stoull(token, &used);
        } catch (const std::logic_error&) {
            throw std::runtime_error("line " + std::to_string(lineno) + ": expected a residue, got '" + token + "'");
        }
        if (used != token.size() || x > 0xffffffffULL) {
            throw std::runtime_error("line " + std::to_string(lineno) + ": expected a residue, got '" + token + "'");
        }
        file.residues.push_back(static_cast<Residue>(x));
    }
    return file;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << contents;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace randgreedy
