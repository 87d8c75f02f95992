#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace irdd {

// Observations (x_i, y_i) with an optional binary treatment channel d_i.
// Invariants: at least one row, all values finite, and when d is present it
// has the same length as x/y with entries in {0,1}.
struct Sample {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::uint8_t> d;  // empty when the treatment channel is absent

  std::size_t size() const { return x.size(); }
  bool has_treatment() const { return !d.empty(); }

  // Throws std::invalid_argument describing the first violation found.
  void validate() const;

  // Canonical order: rows sorted by (x, y, d). All estimators work on the
  // sorted view, so permuting input rows never changes any output.
  Sample sorted_by_x() const;
};

// A side of the cutoff holds no data.
struct insufficient_data_error : std::runtime_error {
  std::size_t n_left, n_right;
  insufficient_data_error(const std::string& what, std::size_t nl, std::size_t nr)
      : std::runtime_error(what), n_left(nl), n_right(nr) {}
};

// Fuzzy estimation with |p_plus - p_minus| below tolerance.
struct weak_discontinuity_error : std::runtime_error {
  double p_minus, p_plus;
  weak_discontinuity_error(const std::string& what, double pm, double pp)
      : std::runtime_error(what), p_minus(pm), p_plus(pp) {}
};

// Window or offset construction without enough structure: a local linear fit
// lacking two distinct supported points, or an MSE-optimal offset requested
// for a side whose boundary slope is not positive.
struct degenerate_window_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace irdd
