#pragma once

#include <string>
#include <vector>

namespace codesign {

struct Dimension {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  bool integer = false;

  double range() const { return upper - lower; }
};

/// Bounded mixed-integer box.
struct DesignSpace {
  std::vector<Dimension> dimensions;

  std::size_t size() const { return dimensions.size(); }
  /// Throws DomainError on empty space, unordered bounds, or non-integral integer bounds.
  void validate() const;
  bool contains(const std::vector<double>& point) const;
  /// Clamps into bounds and rounds integer coordinates.
  std::vector<double> project(std::vector<double> point) const;
};

}  // namespace codesign
