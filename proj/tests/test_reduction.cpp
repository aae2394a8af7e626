// Reduction at zero: cotangent bundles and the prequantized structure.

#include "jd/reduction.hpp"

#include "support.hpp"

using namespace jdtest;

namespace {

MapField quotient(std::vector<ScalarField> comps) {
  return [comps](const Point& p) {
    JetVec v;
    for (const auto& f : comps) v.push_back(f(p));
    return v;
  };
}

CotangentAction translation() {
  const Chart M({"x", "y"}, {{-1, 1}, {-1, 1}});
  return {M, {make_vector({F("0", M), F("1", M)})}, quotient({F("x", M)}), 1};
}

}  // namespace

TEST(CotangentMoment, Examples) {
  VecX xi(2), v(2);
  xi << 1.0, 2.0;
  v << 0.0, 1.0;
  EXPECT_DOUBLE_EQ(cotangent_moment(xi, 5.0, v), 2.0);
  v << 1.0, 0.0;
  EXPECT_DOUBLE_EQ(cotangent_moment(xi, -1.0, v), 1.0);
}

TEST(CotangentReduce, Translation) {
  const CotangentAction act = translation();
  const Report r = cotangent_reduce(act, sample_points(act.M, 100, 11), 11, 1e-9);
  EXPECT_TRUE(passes(r));
  for (const char* id : {"cotangent-moment", "cotangent-zero-level", "cotangent-tangent", "cotangent-canonical"})
    EXPECT_NE(r.find(id), nullptr) << id;
}

TEST(CotangentReduce, Rotation) {
  const Chart M({"x", "y"}, {{0.5, 1.5}, {0.5, 1.5}});
  const CotangentAction act{M, {make_vector({F("-y", M), F("x", M)})}, quotient({F("sqrt(x^2 + y^2)", M)}), 1};
  EXPECT_TRUE(passes(cotangent_reduce(act, sample_points(M, 100, 12), 12, 1e-9)));
}

TEST(CotangentReduce, NonInvariantQuotientFails) {
  CotangentAction act = translation();
  act.quotient = quotient({F("y", act.M)});
  const Report r = cotangent_reduce(act, sample_points(act.M, 50, 13), 13, 1e-9);
  EXPECT_GT(worst(r), 1e-3);
}

TEST(JdMoment, Examples) {
  // ⟨J((X,f)⊕(ξ,g)), v⟩ = ξ(v_Q), independent of X, f, g
  VecX flat(6);  // [X(2), f, ξ(2), g]
  flat << 3.0, 4.0, 5.0, 1.0, -2.0, 7.0;
  VecX v(2);
  v << 0.0, 1.0;
  EXPECT_DOUBLE_EQ(jd_moment(flat, v, 2), -2.0);
  v << 2.0, 1.0;
  EXPECT_DOUBLE_EQ(jd_moment(flat, v, 2), 0.0);
}

TEST(JdMoment, VanishesOnUnitAndLbar0) {
  const PreqInput in = preq_1dim();
  const StructureFrame lbar0 = build_Lbar0(in);
  VecX ev(2);
  ev << 0.0, 1.0;
  for (const auto& q : sample_points(in.Q, 100, 14)) {
    const Mat m = lbar0.matrix(q);
    for (int c = 0; c < m.cols(); ++c) EXPECT_NEAR(jd_moment(m.col(c), ev, 2), 0.0, 1e-12);
  }
}

TEST(ReduceLbar, OneDim) {
  const PreqInput in = preq_1dim();
  const StructureFrame lbar = build_Lbar(in), lbar0 = build_Lbar0(in);
  const VectorField e = coordinate_vector(1, 2);
  const auto qq = sample_points(in.Q, 100, 15);
  const ReductionTarget target{bundle_projection(in), diracization(in.L), &lbar0};
  const Report r = reduce_Lbar(lbar, e, target, qq, 1e-9);
  EXPECT_TRUE(passes(r));
  EXPECT_NE(r.find("zero-level-L0"), nullptr);
  EXPECT_TRUE(passes(theta_match(lbar, e, target.pi, qq, 15, 1e-9)));
  const ZeroLevelRank z = zero_level_rank(lbar, e, qq);
  EXPECT_TRUE(z.constant);
}

TEST(ReduceLbar, Plane) {
  const PreqInput in = preq_plane();
  const StructureFrame lbar = build_Lbar(in), lbar0 = build_Lbar0(in);
  const VectorField e = coordinate_vector(2, 3);
  const auto qq = sample_points(in.Q, 100, 16);
  const ReductionTarget target{bundle_projection(in), diracization(in.L), &lbar0};
  EXPECT_TRUE(passes(reduce_Lbar(lbar, e, target, qq, 1e-9)));
  EXPECT_TRUE(passes(theta_match(lbar, e, target.pi, qq, 16, 1e-9)));
}

TEST(ReduceLbar, WrongTargetFails) {
  // the image is Lᶜ, not the diracization of the zero bivector's graph
  const PreqInput in = preq_plane();
  const StructureFrame lbar = build_Lbar(in);
  const VectorField e = coordinate_vector(2, 3);
  const ReductionTarget target{bundle_projection(in), diracization(graph_of_2form(zero_form(2, 2), in.P))};
  EXPECT_GT(worst(reduce_Lbar(lbar, e, target, sample_points(in.Q, 30, 17), 1e-9)), 1e-3);
}

TEST(ZeroLevelRank, FootnoteExampleIsNotConstant) {
  // graph of ½y²dx with the action of ∂x: the intersection with the generator
  // line jumps on {y = 0}
  const Chart Q({"x", "y"}, {{-1, 1}, {-1, 1}});
  const StructureFrame g = graph_of_1form(make_one_form({F("y^2/2", Q), F("0", Q)}), Q);
  auto pts = sample_points(Q, 100, 18);
  pts.push_back({0.25, 0.0});
  const ZeroLevelRank z = zero_level_rank(g, make_vector({F("1", Q), F("0", Q)}), pts);
  EXPECT_FALSE(z.constant);
  const auto [lo, hi] = std::minmax_element(z.ranks.begin(), z.ranks.end());
  EXPECT_EQ(*lo, 0);
  EXPECT_EQ(*hi, 1);
}

TEST(ZeroLevelRank, ConstantWhenGeneratorIsInside) {
  const Chart Q({"x", "y"}, {{-1, 1}, {-1, 1}});
  const StructureFrame g = graph_of_1form(make_one_form({F("0", Q), F("y", Q)}), Q);
  auto pts = sample_points(Q, 100, 19);
  pts.push_back({0.5, 0.0});
  const ZeroLevelRank z = zero_level_rank(g, make_vector({F("1", Q), F("0", Q)}), pts);
  EXPECT_TRUE(z.constant);
  for (int k : z.ranks) EXPECT_EQ(k, 1);
}
