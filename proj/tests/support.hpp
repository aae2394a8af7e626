#pragma once

#include <gtest/gtest.h>

#include <string>

#include "jd/apaths.hpp"
#include "jd/expr.hpp"
#include "jd/groupoids.hpp"
#include "jd/prequantize.hpp"

namespace jdtest {

using namespace jd;

inline ::testing::AssertionResult passes(const Report& r) {
  for (const auto& c : r.records)
    if (!c.pass)
      return ::testing::AssertionFailure() << c.id << " residual " << c.max_residual << " threshold " << c.threshold
                                           << " " << c.note;
  return ::testing::AssertionSuccess();
}

inline double worst(const Report& r) {
  double w = 0.0;
  for (const auto& c : r.records) w = std::max(w, c.max_residual);
  return w;
}

inline ScalarField F(const std::string& src, const Chart& c) { return field_from(src, c); }

// P = ℝ, L = T*P, Ω = 0, A = x∂x, α = 0, σ = dθ.
inline PreqInput preq_1dim() {
  const Chart P({"x"}, {{-2, 2}});
  PreqInput in;
  in.P = P;
  in.Q = circle_bundle(P);
  in.L.kind = StructureKind::Dirac;
  in.L.chart = P;
  in.L.sections = {dirac_section(zero_vector(1), coordinate_differential(0, 1))};
  in.Omega = zero_form(1, 2);
  in.A = make_vector({F("x", P)});
  in.alpha = zero_form(1, 1);
  in.sigma = make_one_form({F("0", in.Q), F("1", in.Q)});
  return in;
}

// P = ℝ², L = graph(dx∧dy), Ω = dx∧dy, β = 0, σ = dθ + ½(x dy − y dx).
inline PreqInput preq_plane() {
  const Chart P({"x", "y"}, {{-1, 1}, {-1, 1}});
  const TwoForm om = make_form(2, 2, {{{0, 1}, F("1", P)}});
  PreqInput in;
  in.P = P;
  in.Q = circle_bundle(P);
  in.L = graph_of_2form(om, P);
  in.Omega = om;
  in.A = zero_vector(2);
  in.alpha = zero_form(2, 1);
  in.sigma = make_one_form({F("-y/2", in.Q), F("x/2", in.Q), F("1", in.Q)});
  return in;
}

// The Jacobi structure (−x∂x∧∂θ, ∂θ) on (x, θ).
inline StructureFrame lbar_1dim(const Chart& Q) {
  return graph_of_jacobi_pair(make_multi(2, 2, {{{0, 1}, F("-x", Q)}}), coordinate_vector(1, 2), Q);
}

inline double max_diff(const Point& a, const Point& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace jdtest
