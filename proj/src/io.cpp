#include "irdd/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace irdd::io {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& field, double& out) {
  std::string t = strip(field);
  if (t.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stod(t, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == t.size() && std::isfinite(out);
}

void format_double(std::ostringstream& os, double v) {
  if (std::isnan(v)) {
    os << "nan";
  } else {
    os << v;
  }
}

}  // namespace

Sample read_csv(const std::string& path, const CsvColumns& cols) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  std::vector<std::string> header = split_csv_line(line);
  std::ptrdiff_t ix = -1, iy = -1, id = -1;
  for (std::size_t j = 0; j < header.size(); ++j) {
    std::string name = strip(header[j]);
    if (name == cols.x) ix = static_cast<std::ptrdiff_t>(j);
    if (name == cols.y) iy = static_cast<std::ptrdiff_t>(j);
    if (!cols.d.empty() && name == cols.d) id = static_cast<std::ptrdiff_t>(j);
  }
  if (ix < 0) throw std::runtime_error(path + ": no column named '" + cols.x + "'");
  if (iy < 0) throw std::runtime_error(path + ": no column named '" + cols.y + "'");
  if (!cols.d.empty() && id < 0)
    throw std::runtime_error(path + ": no column named '" + cols.d + "'");

  Sample s;
  std::vector<std::string> problems;
  constexpr std::size_t kMaxReported = 8;
  std::size_t row = 1;  // header was row 1
  while (std::getline(in, line)) {
    ++row;
    if (strip(line).empty()) continue;
    std::vector<std::string> fields = split_csv_line(line);
    auto complain = [&](const std::string& what) {
      if (problems.size() < kMaxReported)
        problems.push_back("row " + std::to_string(row) + ": " + what);
    };
    std::size_t need = static_cast<std::size_t>(std::max(ix, std::max(iy, id))) + 1;
    if (fields.size() < need) {
      complain("expected at least " + std::to_string(need) + " fields, got " +
               std::to_string(fields.size()));
      continue;
    }
    double xv, yv, dv = 0;
    bool ok = true;
    if (!parse_double(fields[static_cast<std::size_t>(ix)], xv)) {
      complain("bad value in column '" + cols.x + "'");
      ok = false;
    }
    if (!parse_double(fields[static_cast<std::size_t>(iy)], yv)) {
      complain("bad value in column '" + cols.y + "'");
      ok = false;
    }
    if (id >= 0) {
      if (!parse_double(fields[static_cast<std::size_t>(id)], dv) || (dv != 0 && dv != 1)) {
        complain("column '" + cols.d + "' must be 0 or 1");
        ok = false;
      }
    }
    if (!ok) continue;
    s.x.push_back(xv);
    s.y.push_back(yv);
    if (id >= 0) s.d.push_back(dv == 1 ? 1 : 0);
  }

  if (!problems.empty()) {
    std::string msg = path + ": " + std::to_string(problems.size()) + "+ malformed rows";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw std::runtime_error(msg);
  }
  if (s.x.empty()) throw std::runtime_error(path + ": no data rows");
  s.validate();
  return s;
}

std::string estimator_name(mc::Estimator est) {
  switch (est) {
    case mc::Estimator::irdd:
      return "irdd";
    case mc::Estimator::irdd_mse:
      return "irdd_mse";
    case mc::Estimator::knn:
      return "knn";
    case mc::Estimator::local_linear:
      return "local_linear";
  }
  return "unknown";
}

std::string noise_name(mc::Noise noise) {
  return noise == mc::Noise::heteroskedastic ? "hetero" : "homo";
}

std::string to_csv(const mc::McReport& report) {
  std::ostringstream os;
  os.precision(10);
  os << "dgp,noise,n,estimator,bias,variance,mse,reps,skips\n";
  for (const mc::McRow& r : report.rows) {
    os << r.dgp << ',' << noise_name(r.noise) << ',' << r.n << ',' << estimator_name(r.est)
       << ',';
    format_double(os, r.bias);
    os << ',';
    format_double(os, r.variance);
    os << ',';
    format_double(os, r.mse);
    os << ',' << r.reps << ',' << r.skips << '\n';
  }
  return os.str();
}

std::string to_csv(const mc::CoverageReport& report) {
  std::ostringstream os;
  os.precision(10);
  os << "dgp,noise,n,c,coverage,mean_length,reps,boot_reps,skips\n";
  for (const mc::CoverageRow& r : report.rows) {
    os << r.dgp << ',' << noise_name(r.noise) << ',' << r.n << ',' << r.c << ',';
    format_double(os, r.coverage);
    os << ',';
    format_double(os, r.mean_length);
    os << ',' << r.reps << ',' << r.boot_reps << ',' << r.skips << '\n';
  }
  return os.str();
}

}  // namespace irdd::io
