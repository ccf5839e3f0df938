#pragma once

#include <exactpen/problem.hpp>
#include <exactpen/subsolvers.hpp>

#include <functional>

namespace exactpen {

/// Outer loop parameters. Defaults follow the reference experiments.
struct OuterConfig {
  double tau0 = 500.0;
  double beta1 = 500.0;  // τ increment
  double beta2 = 0.1;    // ε shrink factor
  double beta3 = 1e-2;   // σ₀ = max(β₃τ, β₄)
  double beta4 = kMachineEps;
  double eps0 = 1e-2;
  double eps_final = 1e-3;
  int max_outer = 10000;
  long max_total_inner = 10000;  // inner iterations summed over the whole solve
  double max_time_s = 300.0;
  bool inner_kkt_exit = true;
  /// Consecutive outer iterations at ε_k = eps_final with θ^{1/2} ≤ eps_final,
  /// ‖c‖ > eps_final and a failed KKT test before declaring infeasibility.
  int infeasible_patience = 3;
};

void validate(const OuterConfig& cfg);

enum class SolveStatus { FirstOrder, InfeasibleStationary, MaxIter, TimeLimit };

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIter;
  Vector x;
  Vector y_ls;
  double kkt_residual = 0.0;
  double feasibility = 0.0;  // ‖c(x)‖
  double theta_final = 0.0;
  double tau_final = 0.0;
  int outer_iters = 0;
  long total_inner_iters = 0;
  EvalCounters counters;
  double wall_time_s = 0.0;
};

struct OuterTrace {
  int k = 0;
  double tau = 0.0;
  double eps = 0.0;
  double theta_sqrt = 0.0;
  double kkt_residual = 0.0;
  double c_norm = 0.0;
  int inner_iters = 0;
  InnerStatus inner_status = InnerStatus::MaxIter;
};

struct SolveObserver {
  std::function<void(const OuterTrace&)> on_outer;
  /// Called with the outer index for every inner iteration.
  std::function<void(int, const InnerTrace&)> on_inner;
};

struct KktResult {
  double residual = 0.0;
  Vector y_ls;
};

/// Least-squares multipliers y = argmin ‖∇f + Jᵀy‖ (minimum norm) and the
/// residual ‖∇f + Jᵀy‖.
KktResult kkt_residual(const Vector& g, const Matrix& J);
KktResult kkt_residual(const Problem& p, const Vector& x);

/// Exact ℓ2-penalty method: inner R2 (qn_kind NONE) or R2N solves at fixed τ,
/// τ raised by β₁ while the linearized feasibility measure stays large.
SolveReport solve(const Problem& p, const OuterConfig& cfg = {}, const InnerConfig& inner = {},
                  const SolveObserver& observer = {});

const char* to_string(SolveStatus status);

}  // namespace exactpen
