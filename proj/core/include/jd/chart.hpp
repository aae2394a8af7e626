#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace jd {

using Point = std::vector<double>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// A coordinate chart with a sampling box. A nonzero period marks an angle
// coordinate; the calculus treats it as an ordinary real.
struct Chart {
  std::vector<std::string> names;
  std::vector<Interval> box;
  std::vector<double> period;

  Chart() = default;
  Chart(std::vector<std::string> coord_names, std::vector<Interval> domain,
        std::vector<double> periods = {});

  int dim() const { return static_cast<int>(names.size()); }
  int index_of(const std::string& name) const;  // -1 if absent
  void validate() const;                          // throws std::invalid_argument
};

// Deterministic uniform samples inside the chart box.
std::vector<Point> sample_points(const Chart& chart, int count, std::uint64_t seed);

// Cartesian product chart, coordinates of a first.
Chart product(const Chart& a, const Chart& b);

}  // namespace jd
