#include <exactpen/problem.hpp>
#include <exactpen/registry.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace exactpen;

namespace {

Problem half_norm_squared() {
  Problem p;
  p.name = "half-norm";
  p.n = 2;
  p.m = 0;
  p.x0 = Vector::Zero(2);
  p.eval_f = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  p.grad_f = [](const Vector& x) { return x; };
  p.eval_c = [](const Vector&) { return Vector(0); };
  p.jac = [](const Vector&) { return Matrix(0, 2); };
  return p;
}

}  // namespace

TEST(VerifyDerivatives, ExactQuadraticHasNoViolations) {
  const Problem p = half_norm_squared();
  EXPECT_TRUE(verify_derivatives(p, Vector::LinSpaced(2, 1.0, 2.0), 1e-5).empty());
}

TEST(VerifyDerivatives, PlantedWrongGradientIsReported) {
  Problem p = half_norm_squared();
  p.eval_f = [](const Vector& x) { return x[0] * x[0]; };
  p.grad_f = [](const Vector&) { return Vector::Zero(2); };
  Vector x(2);
  x << 1.0, 0.0;
  const auto v = verify_derivatives(p, x, 1e-5);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, DerivativeKind::Gradient);
  EXPECT_EQ(v[0].col, 0);
  EXPECT_NEAR(v[0].finite_difference, 2.0, 1e-6);
}

TEST(VerifyDerivatives, EveryRegistryProblemAtStartingPoint) {
  for (const auto& name : registry_names()) {
    const Problem p = registry_get(name);
    const auto v = verify_derivatives(p, p.x0, 1e-5);
    EXPECT_TRUE(v.empty()) << name << " has " << v.size() << " derivative violations";
  }
}

TEST(Registry, Hs6Definition) {
  const Problem p = registry_get("hs6");
  EXPECT_EQ(p.n, 2);
  EXPECT_EQ(p.m, 1);
  EXPECT_DOUBLE_EQ(p.x0[0], -1.2);
  EXPECT_DOUBLE_EQ(p.x0[1], 1.0);
  ASSERT_TRUE(p.x_star.has_value());
  EXPECT_NEAR(p.eval_f(*p.x_star), 0.0, 1e-14);
  EXPECT_NEAR(p.eval_c(*p.x_star).norm(), 0.0, 1e-14);
}

TEST(Registry, KnownMultiplierQp) {
  const Problem p = registry_get("qp-known-multiplier");
  ASSERT_TRUE(p.x_star.has_value());
  Vector e1 = Vector::Zero(p.n);
  e1[0] = 1.0;
  EXPECT_EQ(*p.x_star, e1);
  EXPECT_NEAR(p.eval_c(e1).norm(), 0.0, 0.0);
  // ∇f + Jᵀy = 0 at x* with y = −1.
  const Vector r = p.grad_f(e1) + p.jac(e1).transpose() * Vector::Constant(1, -1.0);
  EXPECT_NEAR(r.norm(), 0.0, 1e-15);
}

TEST(Registry, UnknownNameListsKeys) {
  try {
    registry_get("unknown-xyz");
    FAIL() << "expected NotFoundError";
  } catch (const NotFoundError& e) {
    EXPECT_NE(std::string(e.what()).find("hs6"), std::string::npos);
  }
}

TEST(Registry, SizeAndShapeRequirements) {
  const auto names = registry_names();
  EXPECT_GE(names.size(), 10u);
  int infeasible = 0;
  for (const auto& name : names) {
    const Problem p = registry_get(name);
    EXPECT_NO_THROW(validate_problem(p)) << name;
    EXPECT_LE(p.n, 50) << name;
    EXPECT_LT(p.m, p.n) << name;
    infeasible += p.feasible ? 0 : 1;
    if (p.feasible && p.x_star) {
      // some references are published to 7 significant digits
      EXPECT_LE(p.eval_c(*p.x_star).norm(), 1e-5) << name;
      if (p.f_star) {
        EXPECT_NEAR(p.eval_f(*p.x_star), *p.f_star, 1e-5 * (1.0 + std::abs(*p.f_star))) << name;
      }
    }
  }
  EXPECT_EQ(infeasible, 1);
}

TEST(CountedProblem, CountsEveryCallback) {
  const Problem p = registry_get("hs7");
  EvalCounters c;
  const CountedProblem cp(p, c);
  for (int k = 0; k < 7; ++k) cp.f(p.x0);
  cp.grad(p.x0);
  cp.cons(p.x0);
  cp.cons(p.x0);
  cp.jac(p.x0);
  EXPECT_EQ(c.n_f, 7);
  EXPECT_EQ(c.n_grad, 1);
  EXPECT_EQ(c.n_c, 2);
  EXPECT_EQ(c.n_jac, 1);
}

TEST(CountedProblem, ShapeMismatchThrows) {
  Problem p = half_norm_squared();
  p.grad_f = [](const Vector&) { return Vector::Zero(3); };
  EvalCounters c;
  const CountedProblem cp(p, c);
  EXPECT_THROW(cp.grad(Vector::Zero(2)), ShapeError);
}

TEST(QpJson, ParsesAndBuildsProblem) {
  const auto qp = parse_qp_json(
      R"({"Q": [[2, 0], [0, 2]], "g": [0, 0], "A": [[1, 1]], "b": [-1], "x0": [0, 0]})");
  const Problem p = make_qp_problem("json-qp", qp);
  EXPECT_EQ(p.n, 2);
  EXPECT_EQ(p.m, 1);
  Vector x(2);
  x << 0.5, 0.5;
  EXPECT_DOUBLE_EQ(p.eval_f(x), 0.5);
  EXPECT_DOUBLE_EQ(p.eval_c(x)[0], 0.0);
  EXPECT_TRUE(verify_derivatives(p, x, 1e-6).empty());
}

TEST(QpJson, MalformedInputIsAnInputError) {
  EXPECT_THROW(parse_qp_json("{not json"), InputError);
  EXPECT_THROW(make_qp_problem("bad", parse_qp_json(
                   R"({"Q": [[1]], "g": [0, 0], "A": [[1]], "b": [0], "x0": [0]})")),
               InputError);
}
