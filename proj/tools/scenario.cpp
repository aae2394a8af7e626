#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "jd/expr.hpp"

namespace jdcli {

using nlohmann::json;
using namespace jd;

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

const json& req(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw ScenarioError(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ScenarioError(where + "/" + key, "missing");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ScenarioError(where, "expected a number");
  return j.get<double>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) throw ScenarioError(where, "expected a string");
  return j.get<std::string>();
}

const json& array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ScenarioError(where, "expected an array");
  return j;
}

Point point(const json& j, const std::string& where, int dim) {
  array(j, where);
  if (static_cast<int>(j.size()) != dim)
    throw ScenarioError(where, "expected " + std::to_string(dim) + " numbers, got " + std::to_string(j.size()));
  Point p;
  for (std::size_t i = 0; i < j.size(); ++i) p.push_back(number(j[i], where + "/" + std::to_string(i)));
  return p;
}

Chart parse_chart(const json& j, const std::string& where) {
  const json& coords = array(req(j, "coords", where), where + "/coords");
  const json& box = array(req(j, "box", where), where + "/box");
  if (coords.size() != box.size()) throw ScenarioError(where + "/box", "one interval per coordinate expected");
  std::vector<std::string> names;
  std::vector<Interval> iv;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    names.push_back(text(coords[i], where + "/coords/" + std::to_string(i)));
    const Point b = point(box[i], where + "/box/" + std::to_string(i), 2);
    iv.push_back({b[0], b[1]});
  }
  std::vector<double> period;
  if (j.contains("period")) period = point(j["period"], where + "/period", static_cast<int>(names.size()));
  try {
    Chart c(names, iv, period);
    c.validate();
    return c;
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(where, e.what());
  }
}

// Sign of the permutation sorting idx, or 0 on repeats; idx is sorted in place.
int sort_sign(std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j + 1 < idx.size() - i; ++j)
      if (idx[j] > idx[j + 1]) {
        std::swap(idx[j], idx[j + 1]);
        sign = -sign;
      }
  for (std::size_t i = 0; i + 1 < idx.size(); ++i)
    if (idx[i] == idx[i + 1]) return 0;
  return sign;
}

std::vector<int> index_tuple(const std::string& key, const Chart& c, const std::string& where) {
  std::vector<int> idx;
  std::stringstream ss(key);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
    const int k = c.index_of(item);
    if (k < 0) throw ScenarioError(where, "unknown coordinate '" + item + "'");
    idx.push_back(k);
  }
  return idx;
}

CheckRecord failed(const std::string& id, const std::string& message) {
  CheckRecord r;
  r.id = id;
  r.anchor = "setup";
  r.max_residual = std::numeric_limits<double>::infinity();
  r.note = message;
  r.decide();
  return r;
}

std::string parse_message(const ParseError& e) {
  std::string m = "offset " + std::to_string(e.offset()) + ": " + e.message();
  if (!e.expected().empty()) m += " (expected " + e.expected() + ")";
  return m;
}

void prefix(Report& r, const std::string& p) {
  for (auto& rec : r.records) rec.id = p + rec.id;
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "check-structure") return Command::CheckStructure;
  if (name == "prequantize") return Command::Prequantize;
  if (name == "reduce") return Command::Reduce;
  if (name == "groupoid") return Command::Groupoid;
  if (name == "apath") return Command::APath;
  if (name == "vorobjev") return Command::Vorobjev;
  if (name == "all") return Command::All;
  throw std::invalid_argument("unknown command '" + name + "'");
}

std::string to_string(Command c) {
  switch (c) {
    case Command::CheckStructure: return "check-structure";
    case Command::Prequantize: return "prequantize";
    case Command::Reduce: return "reduce";
    case Command::Groupoid: return "groupoid";
    case Command::APath: return "apath";
    case Command::Vorobjev: return "vorobjev";
    case Command::All: return "all";
  }
  return "?";
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path, "cannot open scenario file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError(path + ":byte " + std::to_string(e.byte), e.what());
  }
  return from_json(j, path);
}

Scenario Scenario::from_json(const json& j, const std::string& origin) {
  Scenario s;
  s.doc_ = j;
  s.origin_ = origin;
  s.parse_all();
  return s;
}

void Scenario::parse_all() {
  if (!doc_.is_object()) throw ScenarioError("", "scenario must be a JSON object");
  if (doc_.contains("schema") && doc_["schema"] != 1) throw ScenarioError("/schema", "unsupported schema version");
  name_ = doc_.contains("name") ? text(doc_["name"], "/name") : origin_;
  if (doc_.contains("run")) {
    const json& r = doc_["run"];
    if (r.contains("samples")) config_.samples = static_cast<int>(number(r["samples"], "/run/samples"));
    if (r.contains("seed")) config_.seed = static_cast<std::uint64_t>(number(r["seed"], "/run/seed"));
    if (r.contains("tol")) config_.tol = number(r["tol"], "/run/tol");
    if (r.contains("rk4_nodes")) config_.rk4_nodes = static_cast<int>(number(r["rk4_nodes"], "/run/rk4_nodes"));
  }
  if (doc_.contains("params"))
    for (const auto& [k, v] : doc_["params"].items()) params_[k] = number(v, "/params/" + k);
  if (doc_.contains("charts"))
    for (const auto& [k, v] : doc_["charts"].items()) charts_[k] = parse_chart(v, "/charts/" + k);

  if (doc_.contains("fields")) {
    for (const auto& [name, f] : doc_["fields"].items()) {
      const std::string w = "/fields/" + name;
      FieldEntry e;
      e.chart = text(req(f, "chart", w), w + "/chart");
      const Chart c = chart(w + "/chart", f["chart"]);
      const int n = c.dim();
      if (f.contains("scalar")) {
        e.kind = "scalar";
        e.s = expression(w + "/scalar", f["scalar"], c);
      } else if (f.contains("vector")) {
        e.kind = "vector";
        const json& comps = array(f["vector"], w + "/vector");
        if (static_cast<int>(comps.size()) != n) throw ScenarioError(w + "/vector", "one component per coordinate expected");
        std::vector<ScalarField> v;
        for (std::size_t i = 0; i < comps.size(); ++i) v.push_back(expression(w + "/vector/" + std::to_string(i), comps[i], c));
        e.v = make_vector(v);
      } else if (f.contains("form") || f.contains("bivector")) {
        const bool is_form = f.contains("form");
        const int deg = is_form ? static_cast<int>(number(f["form"], w + "/form")) : 2;
        const json& comps = is_form ? req(f, "components", w) : f["bivector"];
        const std::string cw = is_form ? w + "/components" : w + "/bivector";
        std::map<std::vector<int>, ScalarField> m;
        if (comps.is_array()) {
          if (deg != 1 || static_cast<int>(comps.size()) != n)
            throw ScenarioError(cw, "a component list is only valid for 1-forms, one per coordinate");
          for (int i = 0; i < n; ++i) m[{i}] = expression(cw + "/" + std::to_string(i), comps[at(i)], c);
        } else if (comps.is_object()) {
          for (const auto& [key, src] : comps.items()) {
            std::vector<int> idx = index_tuple(key, c, cw + "/" + key);
            if (static_cast<int>(idx.size()) != deg) throw ScenarioError(cw + "/" + key, "index count does not match the degree");
            const int sgn = sort_sign(idx);
            if (sgn == 0) throw ScenarioError(cw + "/" + key, "repeated index");
            ScalarField s = expression(cw + "/" + key, src, c);
            if (sgn < 0) s = constant_field(-1.0, n) * s;
            if (m.count(idx)) throw ScenarioError(cw + "/" + key, "component given twice");
            m[idx] = s;
          }
        } else {
          throw ScenarioError(cw, "expected an array or an object");
        }
        if (is_form) {
          if (deg < 0 || deg > 3) throw ScenarioError(w + "/form", "degree must be 0..3");
          e.kind = "form" + std::to_string(deg);
          e.f = make_form(n, deg, m);
        } else {
          e.kind = "bivector";
          e.m = make_multi(n, 2, m);
        }
      } else {
        throw ScenarioError(w, "field needs one of scalar, vector, form, bivector");
      }
      fields_[name] = e;
    }
  }

  if (doc_.contains("structures")) {
    // diracization refers to other structures, so it is built in a second pass
    for (const bool derived : {false, true})
    for (const auto& [name, s] : doc_["structures"].items()) {
      const std::string w = "/structures/" + name;
      const std::string kind = text(req(s, "kind", w), w + "/kind");
      if ((kind == "diracization") != derived) continue;
      const auto chart_of = [&](const std::string& key) {
        return charts_.at(fields_.at(field_name(w + "/" + key, s[key])).chart);
      };
      try {
        if (kind == "graph_2form") {
          req(s, "form", w);
          structures_[name] = graph_of_2form(form(w + "/form", s["form"], 2), chart_of("form"));
        } else if (kind == "graph_1form") {
          req(s, "form", w);
          structures_[name] = graph_of_1form(form(w + "/form", s["form"], 1), chart_of("form"));
        } else if (kind == "graph_bivector") {
          req(s, "bivector", w);
          structures_[name] = graph_of_bivector(bivector(w + "/bivector", s["bivector"]), chart_of("bivector"));
        } else if (kind == "jacobi_pair") {
          req(s, "bivector", w);
          req(s, "vector", w);
          structures_[name] =
              graph_of_jacobi_pair(bivector(w + "/bivector", s["bivector"]), vector(w + "/vector", s["vector"]), chart_of("bivector"));
        } else if (kind == "dirac_frame") {
          const Chart c = chart(w + "/chart", req(s, "chart", w));
          StructureFrame fr;
          fr.kind = StructureKind::Dirac;
          fr.chart = c;
          const json& secs = array(req(s, "sections", w), w + "/sections");
          for (std::size_t k = 0; k < secs.size(); ++k) {
            const std::string sw = w + "/sections/" + std::to_string(k);
            const json& X = array(req(secs[k], "X", sw), sw + "/X");
            const json& xi = array(req(secs[k], "xi", sw), sw + "/xi");
            if (static_cast<int>(X.size()) != c.dim() || static_cast<int>(xi.size()) != c.dim())
              throw ScenarioError(sw, "X and xi need one component per coordinate");
            std::vector<ScalarField> xs, ks;
            for (int i = 0; i < c.dim(); ++i) {
              xs.push_back(expression(sw + "/X/" + std::to_string(i), X[at(i)], c));
              ks.push_back(expression(sw + "/xi/" + std::to_string(i), xi[at(i)], c));
            }
            fr.sections.push_back(dirac_section(make_vector(xs), make_one_form(ks)));
          }
          structures_[name] = fr;
        } else if (kind == "diracization") {
          structures_[name] = diracization(structure(w + "/of", req(s, "of", w)));
        } else {
          throw ScenarioError(w + "/kind", "unknown structure kind '" + kind + "'");
        }
      } catch (const StructureError& e) {
        build_failures_.add(failed(name + "/build", e.what()));
      }
    }
  }
  // resolve every block now so that schema errors surface before any check
  if (doc_.contains("prequantize")) (void)preq_input();
  if (doc_.contains("groupoid")) (void)groupoid();
}

Chart Scenario::chart(const std::string& where, const json& ref) const {
  if (ref.is_object()) return parse_chart(ref, where);
  const std::string n = text(ref, where);
  const auto it = charts_.find(n);
  if (it == charts_.end()) throw ScenarioError(where, "unknown chart '" + n + "'");
  return it->second;
}

std::string Scenario::field_name(const std::string& where, const json& ref) const {
  const std::string n = text(ref, where);
  if (!fields_.count(n)) throw ScenarioError(where, "unknown field '" + n + "'");
  return n;
}

ScalarField Scenario::scalar(const std::string& where, const json& ref) const {
  const FieldEntry& e = fields_.at(field_name(where, ref));
  if (e.kind != "scalar") throw ScenarioError(where, "field is a " + e.kind + ", expected a scalar");
  return e.s;
}

VectorField Scenario::vector(const std::string& where, const json& ref) const {
  const FieldEntry& e = fields_.at(field_name(where, ref));
  if (e.kind != "vector") throw ScenarioError(where, "field is a " + e.kind + ", expected a vector");
  return e.v;
}

FormField Scenario::form(const std::string& where, const json& ref, int degree) const {
  const FieldEntry& e = fields_.at(field_name(where, ref));
  if (e.kind != "form" + std::to_string(degree))
    throw ScenarioError(where, "field is a " + e.kind + ", expected a " + std::to_string(degree) + "-form");
  return e.f;
}

MultiField Scenario::bivector(const std::string& where, const json& ref) const {
  const FieldEntry& e = fields_.at(field_name(where, ref));
  if (e.kind != "bivector") throw ScenarioError(where, "field is a " + e.kind + ", expected a bivector");
  return e.m;
}

const StructureFrame& Scenario::structure(const std::string& where, const json& ref) const {
  const std::string n = text(ref, where);
  const auto it = structures_.find(n);
  if (it == structures_.end()) {
    if (build_failures_.find(n + "/build")) throw ScenarioError(where, "structure '" + n + "' failed to build");
    throw ScenarioError(where, "unknown structure '" + n + "'");
  }
  return it->second;
}

ScalarField Scenario::expression(const std::string& where, const json& src, const Chart& c) const {
  if (src.is_number()) return constant_field(src.get<double>(), c.dim());
  const std::string s = text(src, where);
  std::vector<std::string> names;
  std::vector<double> values;
  for (const auto& [k, v] : params_) {
    names.push_back(k);
    values.push_back(v);
  }
  try {
    return expr_field(parse(s, c, names), values);
  } catch (const ParseError& e) {
    throw ScenarioError(where, parse_message(e));
  }
}

CoefficientPath Scenario::time_path(const std::string& where, const json& comps) const {
  array(comps, where);
  std::vector<std::string> names;
  std::vector<double> values;
  for (const auto& [k, v] : params_) {
    names.push_back(k);
    values.push_back(v);
  }
  std::vector<Expr> ex;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string w = where + "/" + std::to_string(i);
    const std::string s = comps[i].is_number() ? std::to_string(comps[i].get<double>()) : text(comps[i], w);
    try {
      ex.push_back(parse(s, std::vector<std::string>{"t"}, names));
    } catch (const ParseError& e) {
      throw ScenarioError(w, parse_message(e));
    }
  }
  return [ex, values](double t) {
    VecX v(static_cast<Eigen::Index>(ex.size()));
    const Jet x[1] = {Jet(t)};
    for (std::size_t i = 0; i < ex.size(); ++i) v(static_cast<Eigen::Index>(i)) = ex[i].eval(x, values).value();
    return v;
  };
}

PreqInput Scenario::preq_input() const {
  const std::string w = "/prequantize";
  const json& b = req(doc_, "prequantize", "");
  PreqInput in;
  in.P = chart(w + "/P", req(b, "P", w));
  in.Q = circle_bundle(in.P);
  in.L = structure(w + "/L", req(b, "L", w));
  if (in.L.kind != StructureKind::Dirac || in.L.dim() != in.P.dim())
    throw ScenarioError(w + "/L", "L must be a Dirac structure on P");
  in.Omega = form(w + "/Omega", req(b, "Omega", w), 2);
  in.A = vector(w + "/A", req(b, "A", w));
  in.alpha = form(w + "/alpha", req(b, "alpha", w), 1);
  in.sigma = form(w + "/sigma", req(b, "sigma", w), 1);
  const auto dim_of = [&](const std::string& key) { return charts_.at(fields_.at(b[key].get<std::string>()).chart).dim(); };
  for (const char* k : {"Omega", "A", "alpha"})
    if (dim_of(k) != in.P.dim()) throw ScenarioError(w + "/" + k, "field must live on P");
  if (dim_of("sigma") != in.P.dim() + 1) throw ScenarioError(w + "/sigma", "sigma must live on P x S^1 (angle last)");
  return in;
}

GroupoidChart Scenario::groupoid() const {
  const std::string w = "/groupoid";
  const json& b = req(doc_, "groupoid", "");
  if (b.contains("builtin")) {
    try {
      return builtin_groupoid(text(b["builtin"], w + "/builtin"));
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(w + "/builtin", e.what());
    }
  }
  GroupoidChart g;
  g.name = b.contains("name") ? text(b["name"], w + "/name") : "custom";
  g.gamma = chart(w + "/gamma", req(b, "gamma", w));
  g.base = chart(w + "/base", req(b, "base", w));
  const json& fs = array(req(b, "factors", w), w + "/factors");
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const std::string fw = w + "/factors/" + std::to_string(k);
    Factor f;
    const std::string kind = text(req(fs[k], "kind", fw), fw + "/kind");
    if (kind == "pair") f.kind = FactorKind::Pair;
    else if (kind == "group") f.kind = FactorKind::Group;
    else if (kind == "action") f.kind = FactorKind::Action;
    else if (kind == "unit") f.kind = FactorKind::Unit;
    else throw ScenarioError(fw + "/kind", "unknown factor kind '" + kind + "'");
    const json& gi = array(req(fs[k], "gamma", fw), fw + "/gamma");
    for (std::size_t i = 0; i < gi.size(); ++i) {
      const std::string n = text(gi[i], fw + "/gamma/" + std::to_string(i));
      const int idx = g.gamma.index_of(n);
      if (idx < 0) throw ScenarioError(fw + "/gamma/" + std::to_string(i), "unknown groupoid coordinate '" + n + "'");
      f.gamma.push_back(idx);
    }
    if (fs[k].contains("base")) {
      const std::string n = text(fs[k]["base"], fw + "/base");
      f.base = g.base.index_of(n);
      if (f.base < 0) throw ScenarioError(fw + "/base", "unknown base coordinate '" + n + "'");
    }
    if (fs[k].contains("rate")) f.rate = number(fs[k]["rate"], fw + "/rate");
    g.factors.push_back(f);
  }
  const int n = g.gamma.dim();
  if (b.contains("theta")) {
    const json& th = array(b["theta"], w + "/theta");
    if (static_cast<int>(th.size()) != n) throw ScenarioError(w + "/theta", "one component per coordinate expected");
    std::vector<ScalarField> comps;
    for (int i = 0; i < n; ++i) comps.push_back(expression(w + "/theta/" + std::to_string(i), th[at(i)], g.gamma));
    g.theta = make_one_form(comps);
    g.f = expression(w + "/f", req(b, "f", w), g.gamma);
  }
  if (b.contains("omega")) {
    std::map<std::vector<int>, ScalarField> m;
    for (const auto& [key, src] : b["omega"].items()) {
      std::vector<int> idx = index_tuple(key, g.gamma, w + "/omega/" + key);
      const int sgn = idx.size() == 2 ? sort_sign(idx) : 0;
      if (sgn == 0) throw ScenarioError(w + "/omega/" + key, "expected two distinct coordinates");
      ScalarField s = expression(w + "/omega/" + key, src, g.gamma);
      m[idx] = sgn > 0 ? s : constant_field(-1.0, n) * s;
    }
    g.omega = make_form(n, 2, m);
  }
  if (b.contains("v")) {
    const json& v = array(b["v"], w + "/v");
    if (static_cast<int>(v.size()) != n) throw ScenarioError(w + "/v", "one component per coordinate expected");
    std::vector<ScalarField> comps;
    for (int i = 0; i < n; ++i) comps.push_back(expression(w + "/v/" + std::to_string(i), v[at(i)], g.gamma));
    g.v = make_vector(comps);
  }
  if (b.contains("deck"))
    for (std::size_t k = 0; k < b["deck"].size(); ++k) {
      const Point t = point(b["deck"][k], w + "/deck/" + std::to_string(k), n);
      g.deck.push_back(Eigen::Map<const VecX>(t.data(), n));
    }
  if (b.contains("extra_points"))
    for (std::size_t k = 0; k < b["extra_points"].size(); ++k)
      g.extra_points.push_back(point(b["extra_points"][k], w + "/extra_points/" + std::to_string(k), n));
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(w, e.what());
  }
  return g;
}

Report Scenario::run(Command cmd) const {
  Report r = build_failures_;
  const auto want = [&](Command c, const char* block) {
    return cmd == c || (cmd == Command::All && (block == nullptr || doc_.contains(block)));
  };
  if (want(Command::CheckStructure, nullptr)) r.append(run_structures());
  if (want(Command::Prequantize, "prequantize")) r.append(run_prequantize());
  if (want(Command::Reduce, "reduce")) r.append(run_reduce());
  if (want(Command::Groupoid, "groupoid")) r.append(run_groupoid());
  if (want(Command::APath, "apath")) r.append(run_apath());
  if (want(Command::Vorobjev, "vorobjev")) r.append(run_vorobjev());
  return r;
}

Report Scenario::run_structures() const {
  Report r;
  for (const auto& [name, e] : fields_) {
    if (e.kind.rfind("form", 0) != 0) continue;
    if (e.kind.back() - '0' + 2 > charts_.at(e.chart).dim()) continue;  // d(d w) has no room
    const auto pts = sample_points(charts_.at(e.chart), config_.samples, config_.seed);
    r.add(measure(name + "/dd", "d(d w) = 0", tol(1e-9), pts, [&](const Point& p) { return max_abs(d(d(e.f(p)))); }));
  }
  std::vector<std::pair<std::string, bool>> todo;
  if (doc_.contains("check")) {
    const json& c = array(doc_["check"], "/check");
    for (std::size_t k = 0; k < c.size(); ++k) {
      const std::string w = "/check/" + std::to_string(k);
      const std::string n = text(req(c[k], "structure", w), w + "/structure");
      if (build_failures_.find(n + "/build")) continue;  // already reported as failing
      (void)structure(w + "/structure", c[k]["structure"]);
      todo.emplace_back(n, c[k].value("closed", true));
    }
  } else {
    for (const auto& kv : structures_) todo.emplace_back(kv.first, true);
  }
  for (const auto& [name, closed] : todo) {
    const StructureFrame& fr = structures_.at(name);
    const auto pts = sample_points(fr.chart, config_.samples, config_.seed);
    Report iso = is_isotropic(fr, pts, tol(1e-9));
    Report cl = is_closed_under_bracket(fr, pts, closed ? tol(1e-8) : 1e-3);
    if (!closed)
      for (auto& rec : cl.records) {
        rec.expect_failure = true;
        rec.decide();
      }
    prefix(iso, name + "/");
    prefix(cl, name + "/");
    r.append(iso);
    r.append(cl);
  }
  return r;
}

Report Scenario::run_prequantize() const {
  const std::string w = "/prequantize";
  const json& b = req(doc_, "prequantize", "");
  const PreqInput in = preq_input();
  const auto pp = sample_points(in.P, config_.samples, config_.seed);
  const auto qq = sample_points(in.Q, config_.samples, config_.seed + 1);
  Report r = check_preq_condition(in, pp, qq, tol(1e-9));
  const StructureFrame lbar = build_Lbar(in);
  const StructureFrame lbar0 = build_Lbar0(in);
  Report iso = is_isotropic(lbar, qq, tol(1e-9));
  Report cl = is_closed_under_bracket(lbar, qq, tol(1e-8));
  prefix(iso, "Lbar/");
  prefix(cl, "Lbar/");
  r.append(iso);
  r.append(cl);
  r.append(morphism_check_I(in, qq, tol(1e-9)));
  r.append(pushforward_check(in, qq, tol(1e-9)));
  r.add(measure("two-extensions", "exactly two isotropic lines extend Lbar_0; one adds (0,0)+(0,1), the other is Lbar",
                tol(1e-9), qq, [&](const Point& q) {
                  const Extensions ex = two_extensions(lbar0, q);
                  if (ex.isotropic_lines != 2 || ex.with_unit < 0) return 1.0;
                  const Mat& other = ex.with_unit == 0 ? ex.second : ex.first;
                  const SubspaceComparison c = compare_spans(other, lbar.matrix(q));
                  return std::max(ex.unit_residual, c.same_rank() ? c.residual : 1.0);
                }));
  if (b.contains("expected")) {
    const StructureFrame& ex = structure(w + "/expected", b["expected"]);
    if (ex.dim() != in.Q.dim()) throw ScenarioError(w + "/expected", "expected structure must live on Q");
    r.add(measure("lbar-expected", "Lbar spans the expected structure", tol(1e-9), qq, [&](const Point& q) {
      const SubspaceComparison c = compare_spans(lbar.matrix(q), ex.matrix(q));
      return c.same_rank() ? c.residual : 1.0;
    }));
  }
  {
    VecX shift;
    if (b.contains("shift")) {
      const Point s = point(b["shift"], w + "/shift", in.L.rank());
      shift = Eigen::Map<const VecX>(s.data(), static_cast<Eigen::Index>(s.size()));
    }
    r.add(measure("lbar-independence", "Lbar does not depend on the choice of (A, alpha) solving 2<A+alpha, .>_+ = beta",
                  tol(1e-9), qq, [&](const Point& q) {
                    const Point p(q.begin(), q.end() - 1);
                    std::vector<double> beta;
                    for (const auto& s : in.L.sections) beta.push_back(beta_of(in, s)(p).value());
                    const AAlphaSolution sol = solve_A_alpha(in.L, beta, p, shift);
                    const SubspaceComparison c = compare_spans(Lbar_matrix(in, q, sol.A, sol.alpha), lbar.matrix(q));
                    return std::max({c.same_rank() ? c.residual : 1.0, sol.equation_residual, sol.isotropy});
                  }));
  }
  if (b.contains("section")) {
    const json& s = b["section"];
    const LineSection S{expression(w + "/section/re", req(s, "re", w + "/section"), in.P),
                        expression(w + "/section/im", req(s, "im", w + "/section"), in.P)};
    std::vector<ScalarField> fs;
    if (b.contains("functions")) {
      const json& f = array(b["functions"], w + "/functions");
      for (std::size_t k = 0; k < f.size(); ++k) fs.push_back(expression(w + "/functions/" + std::to_string(k), f[k], in.P));
    }
    r.append(function_bracket_laws(in, S, fs, qq, tol(1e-8)));
    r.append(flat_connection_check(in, S, pp, tol(1e-8)));
  }
  if (b.contains("gauge")) {
    const ScalarField phi = expression(w + "/gauge", b["gauge"], in.P);
    r.append(gauge_transform(in, phi, qq, tol(1e-8)));
    if (b.value("gauge_control", false)) r.append(gauge_transform(in, phi, qq, tol(1e-8), true));
  }
  return r;
}

Report Scenario::run_reduce() const {
  const std::string w = "/reduce";
  const json& b = req(doc_, "reduce", "");
  Report r;
  if (b.contains("cotangent")) {
    const json& c = b["cotangent"];
    const std::string cw = w + "/cotangent";
    CotangentAction act;
    act.M = chart(cw + "/chart", req(c, "chart", cw));
    const json& gens = array(req(c, "generators", cw), cw + "/generators");
    for (std::size_t k = 0; k < gens.size(); ++k) act.generators.push_back(vector(cw + "/generators/" + std::to_string(k), gens[k]));
    const json& qs = array(req(c, "quotient", cw), cw + "/quotient");
    std::vector<ScalarField> comps;
    for (std::size_t k = 0; k < qs.size(); ++k) comps.push_back(expression(cw + "/quotient/" + std::to_string(k), qs[k], act.M));
    act.quotient = [comps](const Point& p) {
      JetVec v;
      for (const auto& f : comps) v.push_back(f(p));
      return v;
    };
    act.reduced_dim = static_cast<int>(comps.size());
    r.append(cotangent_reduce(act, sample_points(act.M, config_.samples, config_.seed), config_.seed, tol(1e-9)));
  }
  if (b.value("prequantized", false)) {
    const PreqInput in = preq_input();
    const StructureFrame lbar = build_Lbar(in);
    const StructureFrame lbar0 = build_Lbar0(in);
    const VectorField e = coordinate_vector(in.Q.dim() - 1, in.Q.dim());
    const auto qq = sample_points(in.Q, config_.samples, config_.seed + 1);
    ReductionTarget target{bundle_projection(in), diracization(in.L), &lbar0};
    r.append(reduce_Lbar(lbar, e, target, qq, tol(1e-9)));
    r.append(theta_match(lbar, e, target.pi, qq, config_.seed, tol(1e-9)));
    r.append(zero_level_rank(lbar, e, qq).report);
  }
  if (b.contains("rank_probes")) {
    const json& probes = array(b["rank_probes"], w + "/rank_probes");
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const std::string pw = w + "/rank_probes/" + std::to_string(k);
      const StructureFrame& s = structure(pw + "/structure", req(probes[k], "structure", pw));
      const VectorField v = vector(pw + "/generator", req(probes[k], "generator", pw));
      auto pts = sample_points(s.chart, config_.samples, config_.seed);
      if (probes[k].contains("extra_points"))
        for (std::size_t i = 0; i < probes[k]["extra_points"].size(); ++i)
          pts.push_back(point(probes[k]["extra_points"][i], pw + "/extra_points/" + std::to_string(i), s.dim()));
      Report z = zero_level_rank(s, v, pts).report;
      for (auto& rec : z.records) {
        rec.id = text(probes[k]["structure"], pw) + "/" + rec.id;
        rec.expect_failure = !probes[k].value("expect_constant", true);
        rec.decide();
      }
      r.append(z);
    }
  }
  return r;
}

Report Scenario::run_groupoid() const {
  const std::string w = "/groupoid";
  const json& b = req(doc_, "groupoid", "");
  const GroupoidChart g = groupoid();
  const double t9 = tol(1e-9);
  Report r = check_structure(g, config_.samples, config_.seed, t9);
  r.append(check_multiplicativity(g, sample_points(g.pair_chart(), config_.samples, config_.seed + 1), t9));
  const auto gs = gamma_samples(g, config_.samples, config_.seed + 2);
  r.append(check_nondegeneracy(g, gs));
  if (g.v && g.precontact()) r.append(groupoid_moment(g, gs, t9));
  if (!g.deck.empty()) r.append(deck_invariance(g, gs, t9));
  if (b.contains("base_structure")) {
    const StructureFrame& base = structure(w + "/base_structure", b["base_structure"]);
    if (base.dim() != g.base.dim()) throw ScenarioError(w + "/base_structure", "structure must live on the base chart");
    r.append(source_forward(g, base, gs, t9));
    if (g.precontact()) {
      const auto qs = sample_points(g.base, config_.samples, config_.seed + 3);
      r.append(iso_check(g, base, qs, tol(1e-8)));
      std::mt19937_64 rng(config_.seed + 4);
      std::normal_distribution<double> nd;
      r.add(measure("cor-solve", "Y unique with s_*Y = X, theta(Y) = -g, i_Y dtheta = s^*xi - f theta, r_*Y = f",
                    tol(1e-8), gs, [&](const Point& p) {
                      const Point q = values(g.source(seed(p)));
                      const Mat F = base.matrix(q);
                      VecX c(F.cols());
                      for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = nd(rng);
                      const CorSolution s = cor_computation_solve(g, p, F * c);
                      return s.kernel_dim != 0 ? 1.0 : std::max(s.residual, s.r_residual);
                    }));
    }
  }
  if (b.value("reduce_1dim", false)) r.append(reduce_groupoid_1dim(config_.samples, config_.seed + 5, t9));
  return r;
}

Report Scenario::run_apath() const {
  const std::string w = "/apath";
  const json& b = req(doc_, "apath", "");
  Report r;
  const int n = config_.rk4_nodes;
  std::mt19937_64 rng(config_.seed);
  std::uniform_real_distribution<double> coef(-0.5, 0.5);
  const auto random_path = [&](int k) {
    std::vector<std::array<double, 3>> c(at(k));
    for (auto& x : c) x = {coef(rng), coef(rng), coef(rng)};
    return CoefficientPath([c](double t) {
      VecX v(static_cast<Eigen::Index>(c.size()));
      for (std::size_t i = 0; i < c.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = c[i][0] + c[i][1] * std::sin(2 * M_PI * t) + c[i][2] * std::cos(2 * M_PI * t);
      return v;
    });
  };

  if (b.contains("frame")) {
    const GroupoidChart g = groupoid();
    const AlgebroidModel model{structure(w + "/frame", b["frame"])};
    if (model.frame.dim() != g.base.dim()) throw ScenarioError(w + "/frame", "frame must live on the groupoid base");
    std::vector<std::pair<CoefficientPath, Point>> paths;
    if (b.contains("paths")) {
      const json& ps = array(b["paths"], w + "/paths");
      for (std::size_t k = 0; k < ps.size(); ++k) {
        const std::string pw = w + "/paths/" + std::to_string(k);
        const json& coeffs = req(ps[k], "coeffs", pw);
        if (static_cast<int>(coeffs.size()) != model.rank()) throw ScenarioError(pw + "/coeffs", "one coefficient per frame section");
        paths.emplace_back(time_path(pw + "/coeffs", coeffs), point(req(ps[k], "start", pw), pw + "/start", g.base.dim()));
      }
    }
    const int nrandom = b.contains("random_paths") ? static_cast<int>(number(b["random_paths"], w + "/random_paths")) : 0;
    const auto starts = sample_points(g.base, std::max(nrandom, 1), config_.seed + 7);
    for (int k = 0; k < nrandom; ++k) paths.emplace_back(random_path(model.rank()), starts[at(k)]);
    if (!paths.empty()) {
      r.add(measure_once("f-tilde-develop", "f_Gamma(develop(a)) = exp(-int a_3)", tol(1e-6), static_cast<int>(paths.size()), [&] {
        double worst = 0.0;
        for (const auto& [a, q0] : paths) {
          const APath path = integrate_base(model, a, q0, n);
          worst = std::max(worst, std::abs(g.f(develop(g, model, a, q0, n)).value() - f_tilde(path)));
        }
        return worst;
      }));
    }
    if (b.contains("j1")) {
      const json& j = b["j1"];
      const std::string jw = w + "/j1";
      const VectorField e = vector(jw + "/reeb", req(j, "reeb", jw));
      const int section = static_cast<int>(number(req(j, "section", jw), jw + "/section"));
      const int count = static_cast<int>(number(req(j, "paths", jw), jw + "/paths"));
      if (section < 0 || section >= model.rank()) throw ScenarioError(jw + "/section", "section index out of range");
      r.add(measure_once("j1-zero-level", "int <a_1, E> dt = 0 develops into J^{-1}(0) = {f = 1}", tol(1e-6), count, [&] {
        double worst = 0.0;
        for (int k = 0; k < count; ++k) {
          // the chosen section carries the only ⟨ξ, E⟩ weight; give it zero mean
          CoefficientPath base = random_path(model.rank());
          const CoefficientPath a = [base, section](double t) {
            VecX v = base(t);
            v(section) -= 0.5 * (base(0.0)(section) + base(0.5)(section));
            return v;
          };
          const APath path = integrate_base(model, a, starts[at(k % static_cast<int>(starts.size()))], n);
          const double m = moment_integral(path, e);
          const Point end = develop(g, model, a, path.gamma.front(), n);
          worst = std::max({worst, std::abs(m), std::abs(1.0 - g.f(end).value())});
        }
        return worst;
      }));
    }
    if (b.value("order_check", false)) {
      // periodic coefficients superconverge under RK4, so the order is read off
      // c0 + c1 t + c2 e^{2t}
      std::vector<std::array<double, 3>> c(at(model.rank()));
      for (auto& x : c) x = {coef(rng), coef(rng), coef(rng)};
      const CoefficientPath a = [c](double t) {
        VecX v(static_cast<Eigen::Index>(c.size()));
        for (std::size_t i = 0; i < c.size(); ++i) v(static_cast<Eigen::Index>(i)) = c[i][0] + c[i][1] * t + c[i][2] * std::exp(2 * t);
        return v;
      };
      const Point q0 = starts.front();
      std::string note;
      r.add(measure_once("rk4-order", "halving the step divides the develop error by about 16", 0.5, 3, [&] {
        const Point ref = develop(g, model, a, q0, 2048);
        std::vector<double> err;
        for (int steps : {16, 32, 64}) {
          const Point x = develop(g, model, a, q0, steps);
          double e = 0.0;
          for (std::size_t i = 0; i < x.size(); ++i) e = std::max(e, std::abs(x[i] - ref[i]));
          err.push_back(e);
        }
        const double o1 = std::log2(err[0] / err[1]), o2 = std::log2(err[1] / err[2]);
        note = "orders " + std::to_string(o1) + " " + std::to_string(o2);
        return std::max(std::abs(o1 - 4.0), std::abs(o2 - 4.0));
      }));
      r.records.back().note = note;
    }
    if (b.value("concatenation", false)) {
      const CoefficientPath a = random_path(model.rank()), c = random_path(model.rank());
      const Point q0 = starts.front();
      r.add(measure_once("develop-concatenation", "develop(a * b) = develop(a) develop(b)", tol(1e-5), 1, [&] {
        const Point ga = develop(g, model, a, q0, n);
        const Point q1 = values(g.source(seed(ga)));
        const Point gb = develop(g, model, c, q1, n);
        const Point gab = develop(g, model, concatenate(a, c), q0, n);
        const Point prod = values(g.multiply(seed(ga), seed(gb)));
        double e = 0.0;
        for (std::size_t i = 0; i < prod.size(); ++i) e = std::max(e, std::abs(prod[i] - gab[i]));
        return e;
      }));
      r.add(measure_once("f-tilde-concatenation", "f~(a * b) = f~(a) f~(b)", tol(1e-8), 1, [&] {
        const APath pa = integrate_base(model, a, q0, n);
        const APath pb = integrate_base(model, c, pa.gamma.back(), n);
        const APath pab = integrate_base(model, concatenate(a, c), q0, n);
        return std::abs(f_tilde(pab) - f_tilde(pa) * f_tilde(pb));
      }));
    }
    if (b.contains("homotopy")) {
      const json& h = b["homotopy"];
      const std::string hw = w + "/homotopy";
      const CoefficientPath a = h.contains("coeffs") ? time_path(hw + "/coeffs", h["coeffs"]) : random_path(model.rank());
      const Point q0 = h.contains("start") ? point(h["start"], hw + "/start", g.base.dim()) : starts.front();
      const int nt = h.value("nt", 40), ns = h.value("ns", 10);
      const HomotopyGrid coarse = reparametrization_homotopy(model, a, q0, nt, ns);
      const HomotopyGrid fine = reparametrization_homotopy(model, a, q0, 2 * nt, 2 * ns);
      const Report rc = homotopy_residual(model, coarse, 1.0);
      Report rf = homotopy_residual(model, fine, 1.0);
      const double e1 = rc.find("homotopy-equation")->max_residual, e2 = rf.find("homotopy-equation")->max_residual;
      r.add(measure_once("homotopy-convergence", "reparametrization homotopy residual is O(h^2)", 0.5, 2,
                         [&] { return std::abs(std::log2(e1 / e2) - 2.0); }));
      r.records.back().note = "residuals " + std::to_string(e1) + " " + std::to_string(e2);
      for (auto& rec : rf.records)
        if (rec.id != "homotopy-equation") {
          rec.threshold = tol(1e-12);
          rec.decide();
          r.add(rec);
        }
      HomotopyGrid bent = coarse;
      for (std::size_t i = 0; i < bent.t.size(); ++i)
        for (std::size_t j = 0; j < bent.s.size(); ++j) bent.a[i][j](0) += bent.s[j] * bent.t[i] * (1.0 - bent.t[i]);
      Report ctl = homotopy_residual(model, bent, 10.0 * e1, nullptr, true);
      r.add(*ctl.find("homotopy-equation"));
      r.records.back().id = "homotopy-control";
    }
  }
  if (b.contains("lift")) {
    const json& l = b["lift"];
    const std::string lw = w + "/lift";
    const PreqInput in = preq_input();
    const AlgebroidModel lc{diracization(in.L)};
    const json& coeffs = req(l, "coeffs", lw);
    if (static_cast<int>(coeffs.size()) != lc.rank()) throw ScenarioError(lw + "/coeffs", "one coefficient per section of L plus one");
    const Point q0 = point(req(l, "start", lw), lw + "/start", in.Q.dim());
    const APath path = integrate_base(lc, time_path(lw + "/coeffs", coeffs), Point(q0.begin(), q0.end() - 1), n);
    r.append(lift_checks(in, path, q0, l.value("rotation", 0.37), tol(1e-7), tol(1e-8)));
  }
  if (b.contains("sphere")) {
    const json& s = array(b["sphere"], w + "/sphere");
    for (std::size_t k = 0; k < s.size(); ++k) {
      const std::string sw = w + "/sphere/" + std::to_string(k);
      const double scale = number(req(s[k], "scale", sw), sw + "/scale");
      const bool integral = s[k].value("integral", true);
      const PeriodIntegral pi = period_integral(normalized_area_form(scale), unit_sphere());
      r.add(prequantizability("sphere-period-" + std::to_string(k), pi.value, tol(1e-6), !integral));
    }
  }
  return r;
}

Report Scenario::run_vorobjev() const {
  const std::string w = "/vorobjev";
  const json& b = req(doc_, "vorobjev", "");
  const Chart P = chart(w + "/P", req(b, "P", w));
  Interval t{-0.5, 0.5}, fiber{0.3, 1.5};
  if (b.contains("t_range")) {
    const Point p = point(b["t_range"], w + "/t_range", 2);
    t = {p[0], p[1]};
  }
  if (b.contains("fiber")) {
    const Point p = point(b["fiber"], w + "/fiber", 2);
    fiber = {p[0], p[1]};
  }
  VorobjevData data;
  try {
    data = vorobjev_data(P, form(w + "/omega", req(b, "omega", w), 2), form(w + "/potential", req(b, "potential", w), 1), t, fiber);
  } catch (const StructureError& e) {
    throw ScenarioError(w + "/t_range", e.what());
  }
  const auto pts = sample_points(data.total, config_.samples, config_.seed);
  Report r = check_poisson(build_vorobjev(data), pts, tol(1e-8));
  r.append(leaf_form_check(data, pts, tol(1e-7)));
  return r;
}

json report_json(const Report& r, const std::string& scenario, Command cmd, bool timing) {
  json j;
  j["schema"] = 1;
  j["scenario"] = scenario;
  j["command"] = to_string(cmd);
  j["pass"] = r.pass();
  json recs = json::array();
  for (const CheckRecord& c : r.records) {
    json x;
    x["id"] = c.id;
    x["anchor"] = c.anchor;
    x["max_residual"] = std::isfinite(c.max_residual) ? json(c.max_residual) : json("inf");
    x["threshold"] = c.threshold;
    x["pass"] = c.pass;
    x["samples"] = c.samples;
    if (c.expect_failure) x["expect_failure"] = true;
    if (!c.note.empty()) x["note"] = c.note;
    if (timing) x["wall_ms"] = c.wall_ms;
    recs.push_back(x);
  }
  j["records"] = recs;
  return j;
}

}  // namespace jdcli
