#pragma once

#include <string>

#include "irdd/mc.hpp"
#include "irdd/sample.hpp"

namespace irdd::io {

struct CsvColumns {
  std::string x = "x";
  std::string y = "y";
  std::string d;  // empty: no treatment column
};

// Reads a comma-separated file with a header row. Columns are located by
// name; every malformed cell is collected and reported with its row number
// (std::runtime_error listing the first few problems). Values must be finite;
// the treatment column must contain 0/1.
Sample read_csv(const std::string& path, const CsvColumns& cols);

// Fixed-order CSV serializations used by the CLI and tests.
std::string to_csv(const mc::McReport& report);
std::string to_csv(const mc::CoverageReport& report);

std::string estimator_name(mc::Estimator est);
std::string noise_name(mc::Noise noise);

}  // namespace irdd::io
