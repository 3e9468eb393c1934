#pragma once

#include <map>
#include <string>
#include <vector>

namespace rlab {

/// Shortest round-trippable decimal rendering (17 significant digits).
std::string csv_double(double v);

/// Minimal CSV reader for the files this project writes: one header line,
/// comma separation, no quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);

}  // namespace rlab
