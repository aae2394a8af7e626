#include "jd/chart.hpp"

#include <random>
#include <set>
#include <stdexcept>

#include "jd/jet.hpp"

namespace jd {

Chart::Chart(std::vector<std::string> coord_names, std::vector<Interval> domain,
             std::vector<double> periods)
    : names(std::move(coord_names)), box(std::move(domain)), period(std::move(periods)) {
  if (period.empty()) period.assign(names.size(), 0.0);
  validate();
}

int Chart::index_of(const std::string& name) const {
  for (int i = 0; i < dim(); ++i)
    if (names[static_cast<std::size_t>(i)] == name) return i;
  return -1;
}

void Chart::validate() const {
  if (names.empty()) throw std::invalid_argument("chart must have at least one coordinate");
  if (names.size() > static_cast<std::size_t>(kMaxDim))
    throw std::invalid_argument("chart dimension exceeds " + std::to_string(kMaxDim));
  if (box.size() != names.size() || period.size() != names.size())
    throw std::invalid_argument("chart box/period size does not match coordinate count");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!seen.insert(names[i]).second) throw std::invalid_argument("duplicate coordinate '" + names[i] + "'");
    if (!(box[i].lo <= box[i].hi)) throw std::invalid_argument("empty interval for '" + names[i] + "'");
  }
}

std::vector<Point> sample_points(const Chart& chart, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Point p(static_cast<std::size_t>(chart.dim()));
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = chart.box[i].lo + (chart.box[i].hi - chart.box[i].lo) * u(rng);
    pts.push_back(std::move(p));
  }
  return pts;
}

Chart product(const Chart& a, const Chart& b) {
  Chart c;
  c.names = a.names;
  c.box = a.box;
  c.period = a.period;
  c.names.insert(c.names.end(), b.names.begin(), b.names.end());
  c.box.insert(c.box.end(), b.box.begin(), b.box.end());
  c.period.insert(c.period.end(), b.period.begin(), b.period.end());
  c.validate();
  return c;
}

}  // namespace jd
