#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jd/chart.hpp"

namespace jd {

// One verified identity. A record passes when max_residual is below the
// threshold, or above it for negative controls (expect_failure).
struct CheckRecord {
  std::string id;
  std::string anchor;  // the identity being checked, written out
  double max_residual = 0.0;
  double threshold = 0.0;
  bool expect_failure = false;
  bool pass = false;
  int samples = 0;
  double wall_ms = 0.0;
  std::string note;

  void decide();
};

struct Report {
  std::vector<CheckRecord> records;

  bool pass() const;
  void add(CheckRecord r) { records.push_back(std::move(r)); }
  void append(const Report& o) { records.insert(records.end(), o.records.begin(), o.records.end()); }
  const CheckRecord* find(const std::string& id) const;
};

// Runs fn on every point, keeping the largest residual. Exceptions become a
// failing record carrying the message.
CheckRecord measure(const std::string& id, const std::string& anchor, double threshold,
                    const std::vector<Point>& points, const std::function<double(const Point&)>& fn,
                    bool expect_failure = false);

// Same, for checks that are not organised per point.
CheckRecord measure_once(const std::string& id, const std::string& anchor, double threshold, int samples,
                         const std::function<double()>& fn, bool expect_failure = false);

}  // namespace jd
