#pragma once

#include <exactpen/models.hpp>
#include <exactpen/problem.hpp>
#include <exactpen/prox.hpp>
#include <exactpen/quasi_newton.hpp>

#include <chrono>
#include <functional>
#include <optional>

namespace exactpen {

enum class QnKind { None, LBFGS, LSR1 };

/// Parameters of the R2 / R2N regularization methods.
struct InnerConfig {
  double eta1 = 1e-4;         // successful step threshold
  double eta2 = 0.9;          // very successful step threshold
  double gamma1 = 3.0;        // σ inflation after a rejected step
  double gamma3 = 1.0 / 3.0;  // σ deflation after a very successful step
  double sigma_min = kMachineEps;
  int max_inner = 10000;
  double theta_param = 0.5;  // R2N: ν⁻¹ = (σ + ‖B‖)/θ for the stationarity measure
  QnKind qn_kind = QnKind::None;
  int qn_memory = 5;
  int max_curvature_retries = 200;
  ProxSettings prox;
};

void validate(const InnerConfig& cfg);

enum class InnerStatus { FirstOrder, MaxIter, Stalled, TimeLimit };

/// One inner iteration, reported before the iterate is updated.
struct InnerTrace {
  int j = 0;
  double tau = 0.0;
  double f = 0.0;
  double c_norm = 0.0;
  double xi = 0.0;
  double sigma = 0.0;
  double rho = 0.0;
  bool accepted = false;
  int prox_iters = 0;
  double decrease = 0.0;     // (f + τ‖c‖)(x) − (f + τ‖c‖)(x + s)
  double model_error = 0.0;  // |actual − model| / ‖s‖²
};

struct InnerHooks {
  std::function<void(const InnerTrace&)> on_iteration;
  /// Checked at every new iterate; returning true ends the solve as FirstOrder.
  std::function<bool(const ModelPoint&)> early_stop;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct InnerResult {
  ModelPoint point;  // final iterate with cached f, ∇f, c, J
  double sigma_final = 0.0;
  double xi_final = 0.0;
  double statistic_final = 0.0;
  InnerStatus status = InnerStatus::MaxIter;
  int inner_iters = 0;  // trial points evaluated
  int accepted_steps = 0;
  int curvature_retries = 0;
  bool early_stop = false;

  const Vector& x() const { return point.x; }
};

/// Adaptive proximal-gradient method R2 on f + τ‖c‖ at fixed τ. Stops at the
/// first iterate with √(σ·ξ) ≤ eps_k.
InnerResult r2_solve(const CountedProblem& p, const ModelPoint& start, double tau, double eps_k,
                     double sigma0, const InnerConfig& cfg, const InnerHooks& hooks = {});
InnerResult r2_solve(const CountedProblem& p, const Vector& x_start, double tau, double eps_k,
                     double sigma0, const InnerConfig& cfg, const InnerHooks& hooks = {});

/// Proximal quasi-Newton method R2N. `op` carries the curvature pairs and is
/// updated in place after every accepted step.
InnerResult r2n_solve(const CountedProblem& p, const ModelPoint& start, double tau, double eps_k,
                      double sigma0, const InnerConfig& cfg, QuasiNewtonOp& op,
                      const InnerHooks& hooks = {});
InnerResult r2n_solve(const CountedProblem& p, const Vector& x_start, double tau, double eps_k,
                      double sigma0, const InnerConfig& cfg, const InnerHooks& hooks = {});

QuasiNewtonOp make_quasi_newton(const InnerConfig& cfg, Eigen::Index n);

const char* to_string(InnerStatus status);

}  // namespace exactpen
