#include "alstl/kernels.hpp"

#include <cassert>
#include <limits>

namespace alstl::kernels::scalar {

double reduce_min(std::span<const double> xs) {
  double acc = std::numeric_limits<double>::infinity();
  for (double x : xs) {
    if (x < acc) acc = x;
  }
  return acc;
}

double reduce_max(std::span<const double> xs) {
  double acc = -std::numeric_limits<double>::infinity();
  for (double x : xs) {
    if (x > acc) acc = x;
  }
  return acc;
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace alstl::kernels::scalar
