#include "jd/report.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <limits>

namespace jd {

void CheckRecord::decide() {
  if (std::isnan(max_residual)) {
    pass = false;
    return;
  }
  pass = expect_failure ? max_residual > threshold : max_residual < threshold;
}

bool Report::pass() const {
  for (const auto& r : records)
    if (!r.pass) return false;
  return true;
}

const CheckRecord* Report::find(const std::string& id) const {
  for (const auto& r : records)
    if (r.id == id) return &r;
  return nullptr;
}

CheckRecord measure(const std::string& id, const std::string& anchor, double threshold,
                    const std::vector<Point>& points, const std::function<double(const Point&)>& fn,
                    bool expect_failure) {
  CheckRecord r;
  r.id = id;
  r.anchor = anchor;
  r.threshold = threshold;
  r.expect_failure = expect_failure;
  r.samples = static_cast<int>(points.size());
  const auto t0 = std::chrono::steady_clock::now();
  try {
    for (const Point& p : points) {
      const double v = fn(p);
      if (std::isnan(v)) {
        r.max_residual = std::numeric_limits<double>::quiet_NaN();
        break;
      }
      r.max_residual = std::max(r.max_residual, v);
    }
  } catch (const std::exception& e) {
    r.max_residual = std::numeric_limits<double>::quiet_NaN();
    r.note = e.what();
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  r.decide();
  return r;
}

CheckRecord measure_once(const std::string& id, const std::string& anchor, double threshold, int samples,
                         const std::function<double()>& fn, bool expect_failure) {
  CheckRecord r;
  r.id = id;
  r.anchor = anchor;
  r.threshold = threshold;
  r.expect_failure = expect_failure;
  r.samples = samples;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.max_residual = fn();
  } catch (const std::exception& e) {
    r.max_residual = std::numeric_limits<double>::quiet_NaN();
    r.note = e.what();
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  r.decide();
  return r;
}

}  // namespace jd
