#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jd/apaths.hpp"
#include "jd/groupoids.hpp"
#include "jd/prequantize.hpp"
#include "jd/reduction.hpp"
#include "jd/vorobjev.hpp"

namespace jdcli {

// Schema or reference problem, located by a JSON pointer.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string where, const std::string& message)
      : std::runtime_error(where + ": " + message), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct RunConfig {
  int samples = 100;
  std::uint64_t seed = 1;
  std::optional<double> tol;  // overrides every threshold when set
  int rk4_nodes = 1000;
  bool timing = false;
};

enum class Command { CheckStructure, Prequantize, Reduce, Groupoid, APath, Vorobjev, All };

Command parse_command(const std::string& name);  // throws std::invalid_argument
std::string to_string(Command c);

// A parsed scenario. Charts, fields and structures are resolved eagerly so
// every expression error surfaces before any check runs.
class Scenario {
 public:
  static Scenario load(const std::string& path);
  static Scenario from_json(const nlohmann::json& j, const std::string& origin = "<json>");

  const std::string& name() const { return name_; }
  RunConfig config() const { return config_; }
  void override_config(const RunConfig& c) { config_ = c; }

  jd::Report run(Command cmd) const;

 private:
  void parse_all();

  jd::Chart chart(const std::string& where, const nlohmann::json& ref) const;
  std::string field_name(const std::string& where, const nlohmann::json& ref) const;
  jd::ScalarField scalar(const std::string& where, const nlohmann::json& ref) const;
  jd::VectorField vector(const std::string& where, const nlohmann::json& ref) const;
  jd::FormField form(const std::string& where, const nlohmann::json& ref, int degree) const;
  jd::MultiField bivector(const std::string& where, const nlohmann::json& ref) const;
  const jd::StructureFrame& structure(const std::string& where, const nlohmann::json& ref) const;
  jd::ScalarField expression(const std::string& where, const nlohmann::json& src, const jd::Chart& chart) const;
  jd::CoefficientPath time_path(const std::string& where, const nlohmann::json& comps) const;

  jd::PreqInput preq_input() const;
  jd::GroupoidChart groupoid() const;

  jd::Report run_structures() const;
  jd::Report run_prequantize() const;
  jd::Report run_reduce() const;
  jd::Report run_groupoid() const;
  jd::Report run_apath() const;
  jd::Report run_vorobjev() const;

  double tol(double def) const { return config_.tol.value_or(def); }

  nlohmann::json doc_;
  std::string origin_;
  std::string name_;
  RunConfig config_;
  std::map<std::string, double> params_;
  std::map<std::string, jd::Chart> charts_;
  struct FieldEntry {
    std::string chart;
    std::string kind;  // scalar, vector, form1, form2, bivector
    jd::ScalarField s;
    jd::VectorField v;
    jd::FormField f;
    jd::MultiField m;
  };
  std::map<std::string, FieldEntry> fields_;
  std::map<std::string, jd::StructureFrame> structures_;
  jd::Report build_failures_;  // structures whose construction threw
};

// Report as JSON; wall times only when timing is set so that reports are
// byte-identical across runs otherwise.
nlohmann::json report_json(const jd::Report& r, const std::string& scenario, Command cmd, bool timing);

}  // namespace jdcli
