#include "support/problems.hpp"

#include <exactpen/penalty.hpp>
#include <exactpen/registry.hpp>
#include <exactpen/subsolvers.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace exactpen;

namespace {

struct Recorder {
  std::vector<InnerTrace> steps;
  InnerHooks hooks() {
    InnerHooks h;
    h.on_iteration = [this](const InnerTrace& t) { steps.push_back(t); };
    return h;
  }
};

Vector e1(int n) {
  Vector v = Vector::Zero(n);
  v[0] = 1.0;
  return v;
}

}  // namespace

TEST(R2, ExactPenaltyRecoversConstrainedOptimum) {
  const Problem p = registry_get("qp-known-multiplier");
  EvalCounters cnt;
  const InnerResult r = r2_solve(CountedProblem(p, cnt), p.x0, 2.0, 1e-6, 1.0, InnerConfig{});
  EXPECT_EQ(r.status, InnerStatus::FirstOrder);
  EXPECT_LE((r.x() - e1(p.n)).norm(), 1e-5);
}

TEST(R2, DrivesIdentityConstraintToZero) {
  const Problem p = testprob::zero_objective_identity_constraint(5.0);
  EvalCounters cnt;
  const InnerResult r = r2_solve(CountedProblem(p, cnt), p.x0, 1.0, 1e-8, 1.0, InnerConfig{});
  EXPECT_NE(r.status, InnerStatus::MaxIter);
  EXPECT_NEAR(r.x()[0], 0.0, 1e-8);
  EXPECT_NEAR(theta(p.eval_c(r.x()), p.jac(r.x())), 0.0, 1e-8);
}

TEST(R2, HugeToleranceReturnsImmediately) {
  const Problem p = registry_get("hs6");
  EvalCounters cnt;
  const InnerResult r = r2_solve(CountedProblem(p, cnt), p.x0, 500.0, 1e6, 5.0, InnerConfig{});
  EXPECT_EQ(r.status, InnerStatus::FirstOrder);
  EXPECT_EQ(r.x(), p.x0);
  EXPECT_EQ(r.inner_iters, 0);
  EXPECT_EQ(cnt.n_f, 1);
}

TEST(R2, RejectsInvalidArguments) {
  const Problem p = registry_get("hs6");
  EvalCounters cnt;
  InnerConfig cfg;
  EXPECT_THROW(r2_solve(CountedProblem(p, cnt), p.x0, 1.0, 1e-3, cfg.sigma_min / 2, cfg), InputError);
  EXPECT_THROW(r2_solve(CountedProblem(p, cnt), p.x0, 0.0, 1e-3, 1.0, cfg), InputError);
  cfg.eta2 = 1e-6;
  EXPECT_THROW(r2_solve(CountedProblem(p, cnt), p.x0, 1.0, 1e-3, 1.0, cfg), InputError);
}

TEST(R2, InvariantsAlongTheRun) {
  for (const char* name : {"hs6", "hs26", "hs78", "rank-deficient-dup"}) {
    const Problem p = registry_get(name);
    EvalCounters cnt;
    Recorder rec;
    InnerConfig cfg;
    cfg.max_inner = 3000;
    const double tau = 50.0;
    const InnerResult r = r2_solve(CountedProblem(p, cnt), p.x0, tau, 1e-4, 0.5, cfg, rec.hooks());
    EXPECT_EQ(cnt.n_f, r.inner_iters + 1) << name;
    EXPECT_EQ(static_cast<int>(rec.steps.size()), r.inner_iters) << name;
    double merit = p.eval_f(p.x0) + tau * p.eval_c(p.x0).norm();
    for (const InnerTrace& t : rec.steps) {
      EXPECT_GE(t.sigma, cfg.sigma_min);
      EXPECT_NEAR(t.f + tau * t.c_norm, merit, 1e-9 * (1.0 + std::abs(merit)));
      if (t.accepted) {
        EXPECT_GE(t.decrease, cfg.eta1 * t.xi - 1e-12) << name;
        merit -= t.decrease;
      }
    }
  }
}

TEST(R2, ConvergesOnConvexQp) {
  const Problem p = registry_get("qp-known-multiplier");
  EvalCounters cnt;
  InnerConfig cfg;
  cfg.max_inner = 100000;
  const InnerResult r = r2_solve(CountedProblem(p, cnt), p.x0, 3.0, 1e-12, 1.0, cfg);
  EXPECT_LE((r.x() - *p.x_star).norm(), 1e-4);
}

TEST(R2N, LbfgsMatchesR2Minimizer) {
  const Problem p = registry_get("qp-known-multiplier");
  InnerConfig cfg;
  EvalCounters c_r2, c_qn;
  const InnerResult a = r2_solve(CountedProblem(p, c_r2), p.x0, 2.0, 1e-6, 1.0, cfg);
  cfg.qn_kind = QnKind::LBFGS;
  const InnerResult b = r2n_solve(CountedProblem(p, c_qn), p.x0, 2.0, 1e-6, 1.0, cfg);
  EXPECT_EQ(b.status, InnerStatus::FirstOrder);
  EXPECT_LE((a.x() - b.x()).norm(), 1e-5);
  EXPECT_LE((b.x() - e1(p.n)).norm(), 1e-5);
}

TEST(R2N, LbfgsNeedsNoMoreObjectiveEvaluationsInFullSolve) {
  const Problem p = registry_get("qp-known-multiplier");
  InnerConfig cfg;
  const SolveReport a = solve(p, OuterConfig{}, cfg);
  cfg.qn_kind = QnKind::LBFGS;
  const SolveReport b = solve(p, OuterConfig{}, cfg);
  ASSERT_EQ(a.status, SolveStatus::FirstOrder);
  ASSERT_EQ(b.status, SolveStatus::FirstOrder);
  EXPECT_LE(b.counters.n_f, a.counters.n_f);
}

TEST(R2N, FirstStepWithIdentitySeedIsShiftedR2Step) {
  // With B = I the R2N model is the R2 model with σ + 1.
  const Problem p = registry_get("hs7");
  InnerConfig cfg;
  cfg.max_inner = 1;
  EvalCounters c1, c2;
  Recorder r1, r2;
  const double sigma = 4.0;
  const InnerResult a = r2_solve(CountedProblem(p, c1), p.x0, 10.0, 1e-12, sigma + 1.0, cfg, r1.hooks());
  cfg.qn_kind = QnKind::LBFGS;
  const InnerResult b = r2n_solve(CountedProblem(p, c2), p.x0, 10.0, 1e-12, sigma, cfg, r2.hooks());
  ASSERT_EQ(r1.steps.size(), 1u);
  ASSERT_EQ(r2.steps.size(), 1u);
  EXPECT_EQ(r1.steps[0].accepted, r2.steps[0].accepted);
  EXPECT_NEAR(r1.steps[0].decrease, r2.steps[0].decrease, 1e-10);
  EXPECT_LE((a.x() - b.x()).norm(), 1e-10);
}

TEST(R2N, PlantedNegativeCurvatureForcesRegularizationIncrease) {
  const Problem p = testprob::plane_projection();
  InnerConfig cfg;
  cfg.qn_kind = QnKind::LSR1;
  QuasiNewtonOp op = make_quasi_newton(cfg, 2);
  Vector s(2), y(2);
  s << 1.0, 0.0;
  y << -5.0, 0.0;
  ASSERT_TRUE(op.update(s, y));
  ASSERT_LT(op.min_eigenvalue(), -1.0);
  EvalCounters cnt;
  const CountedProblem cp(p, cnt);
  const InnerResult r = r2n_solve(cp, evaluate_point(cp, p.x0, 2.0), 2.0, 1e-6, 1.0, cfg, op);
  EXPECT_GE(r.curvature_retries, 1);
  EXPECT_EQ(r.status, InnerStatus::FirstOrder);
  EXPECT_LE((r.x() - *p.x_star).norm(), 1e-6);
}

TEST(R2N, RequiresQuasiNewtonKind) {
  const Problem p = registry_get("hs6");
  EvalCounters cnt;
  EXPECT_THROW(r2n_solve(CountedProblem(p, cnt), p.x0, 1.0, 1e-3, 1.0, InnerConfig{}), InputError);
}

TEST(Inner, EarlyStopHookEndsSolve) {
  const Problem p = registry_get("hs7");
  EvalCounters cnt;
  InnerHooks hooks;
  int calls = 0;
  hooks.early_stop = [&](const ModelPoint&) { return ++calls == 2; };
  const InnerResult r = r2_solve(CountedProblem(p, cnt), p.x0, 10.0, 1e-12, 1.0, InnerConfig{}, hooks);
  EXPECT_TRUE(r.early_stop);
  EXPECT_EQ(r.status, InnerStatus::FirstOrder);
  EXPECT_EQ(r.accepted_steps, 1);
}

TEST(Inner, MaxIterations) {
  const Problem p = registry_get("hs6");
  EvalCounters cnt;
  InnerConfig cfg;
  cfg.max_inner = 5;
  const InnerResult r = r2_solve(CountedProblem(p, cnt), p.x0, 500.0, 1e-12, 5.0, cfg);
  EXPECT_EQ(r.status, InnerStatus::MaxIter);
  EXPECT_EQ(r.inner_iters, 5);
}
