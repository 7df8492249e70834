#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "randgreedy/config.hpp"
#include "randgreedy/zring.hpp"

namespace randgreedy {

inline constexpr const char* kArtifactName = "randgreedy";
inline constexpr const char* kVersion = "1.0.0";

/// Header object every output file starts with: artifact, version, kind,
/// the effective configuration, seed and mode flags.
nlohmann::json output_header(const std::string& kind, const RunConfig& cfg, std::uint64_t seed,
                             const nlohmann::json& modes);

/// I-files: "# <header JSON>" then one decimal residue per line.
void write_residues(std::ostream& out, std::span<const Residue> I, const nlohmann::json& header);

struct ResidueFile {
    std::vector<Residue> residues;  // in file order
    nlohmann::json header;          // empty object when absent
};

/// Throws std::runtime_error with the line number on malformed input.
ResidueFile read_residues(std::istream& in);

std::uint64_t fnv1a64(std::string_view bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace randgreedy
