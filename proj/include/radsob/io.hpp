#pragma once

// JSON specs for manifolds and profiles, CSV tables with '#' metadata lines,
// and report serialization. All writers are deterministic.
//
// Manifold JSON:  {"n": 3, "label": "...", "warp": {"kind": "euclidean"}}
//   warp kinds:   euclidean | hyperbolic {"k"} | expression {"formula"} | grid {"samples": [[r, psi], ...]}
// Profile JSON:   {"kind": "aubin_talenti", "b"} | truncated {"b", "eps"} | gaussian {"a"}
//                 | grid {"samples": [[r, f], ...]}

#include <map>
#include <string>
#include <vector>

#include "radsob/manifold.hpp"
#include "radsob/profiles.hpp"
#include "radsob/variational.hpp"

namespace radsob {

/// Throws Error(parse) naming the offending key.
ModelManifold parse_manifold(const std::string& json_text);
RadialProfile parse_profile(const std::string& json_text, int n);
/// Reads a file; Error(parse) if it cannot be opened.
std::string read_text(const std::string& path);

struct CsvTable {
  std::vector<std::string> metadata;  // written as "# <line>"
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  [[nodiscard]] std::vector<double> column(const std::string& name) const;
};

/// 17 significant digits, '.' separator.
std::string format_double(double x);
std::string to_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);

/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::string& path, const std::string& content);

std::string to_json(const ValidationReport& report);
std::string to_json(const RigidityReport& report);
/// One table per curve: "quotient", "rho", "isoperimetric".
std::map<std::string, CsvTable> to_csv_tables(const RigidityReport& report);

}  // namespace radsob
