#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace alstl {

/// Normalized robustness of one trajectory against an ordered spec list.
struct RobustnessVector {
  std::vector<double> values;
  std::vector<std::string> spec_ids;

  std::size_t size() const noexcept { return values.size(); }
  bool operator==(const RobustnessVector&) const = default;
};

/// Builds a vector with generated ids "phi1".."phin".
RobustnessVector make_robustness_vector(std::vector<double> values);

}  // namespace alstl
