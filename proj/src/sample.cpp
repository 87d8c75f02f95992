#include "irdd/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace irdd {

void Sample::validate() const {
  if (x.empty()) throw std::invalid_argument("sample: no observations");
  if (y.size() != x.size())
    throw std::invalid_argument("sample: x and y lengths differ (" + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()) + ")");
  if (!d.empty() && d.size() != x.size())
    throw std::invalid_argument("sample: treatment length differs from x");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]))
      throw std::invalid_argument("sample: x[" + std::to_string(i) + "] is not finite");
    if (!std::isfinite(y[i]))
      throw std::invalid_argument("sample: y[" + std::to_string(i) + "] is not finite");
    if (!d.empty() && d[i] > 1)
      throw std::invalid_argument("sample: d[" + std::to_string(i) + "] is not 0/1");
  }
}

Sample Sample::sorted_by_x() const {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    if (x[i] != x[j]) return x[i] < x[j];
    if (y[i] != y[j]) return y[i] < y[j];
    if (!d.empty() && d[i] != d[j]) return d[i] < d[j];
    return false;
  });
  Sample out;
  out.x.reserve(x.size());
  out.y.reserve(x.size());
  if (!d.empty()) out.d.reserve(x.size());
  for (std::size_t i : idx) {
    out.x.push_back(x[i]);
    out.y.push_back(y[i]);
    if (!d.empty()) out.d.push_back(d[i]);
  }
  return out;
}

}  // namespace irdd
