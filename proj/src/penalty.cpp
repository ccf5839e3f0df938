#include <exactpen/linalg.hpp>
#include <exactpen/penalty.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

namespace exactpen {

void validate(const OuterConfig& cfg) {
  if (!(cfg.tau0 > 0.0) || !(cfg.beta1 > 0.0) || !(cfg.beta3 > 0.0) || !(cfg.beta4 > 0.0)) {
    throw InputError("OuterConfig: tau0, beta1, beta3 and beta4 must be positive");
  }
  if (!(cfg.beta2 > 0.0 && cfg.beta2 < 1.0)) {
    throw InputError("OuterConfig: beta2 must lie in (0, 1)");
  }
  if (!(cfg.eps_final > 0.0) || !(cfg.eps0 >= cfg.eps_final)) {
    throw InputError("OuterConfig: need eps0 >= eps_final > 0");
  }
  if (cfg.max_outer < 0 || cfg.max_total_inner < 0 || !(cfg.max_time_s > 0.0)) {
    throw InputError("OuterConfig: budgets must be nonnegative and max_time_s positive");
  }
  if (cfg.infeasible_patience < 1) {
    throw InputError("OuterConfig: infeasible_patience must be at least 1");
  }
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::FirstOrder:
      return "first_order";
    case SolveStatus::InfeasibleStationary:
      return "infeasible_stationary";
    case SolveStatus::MaxIter:
      return "max_iter";
    case SolveStatus::TimeLimit:
      return "time_limit";
  }
  return "unknown";
}

KktResult kkt_residual(const Vector& g, const Matrix& J) {
  if (J.cols() != g.size()) {
    throw InputError("kkt_residual: gradient and Jacobian disagree");
  }
  KktResult out;
  if (J.rows() == 0) {
    out.y_ls = Vector(0);
    out.residual = g.norm();
    return out;
  }
  // Normal equations J Jᵀ y = −J g of the least-squares problem.
  out.y_ls = solve_least_norm(J, -(J * g));
  out.residual = (g + J.transpose() * out.y_ls).norm();
  return out;
}

KktResult kkt_residual(const Problem& p, const Vector& x) {
  return kkt_residual(p.grad_f(x), p.jac(x));
}

SolveReport solve(const Problem& p, const OuterConfig& cfg, const InnerConfig& inner,
                  const SolveObserver& observer) {
  validate_problem(p);
  validate(cfg);
  validate(inner);
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const auto deadline = start + std::chrono::duration_cast<clock::duration>(
                                    std::chrono::duration<double>(cfg.max_time_s));

  SolveReport rep;
  CountedProblem cp(p, rep.counters);
  double tau = cfg.tau0;
  double eps = cfg.eps0;
  ModelPoint mp = evaluate_point(cp, p.x0, tau);

  std::optional<QuasiNewtonOp> qn;
  if (inner.qn_kind != QnKind::None) {
    qn.emplace(make_quasi_newton(inner, p.n));
  }

  auto kkt_passes = [&](const ModelPoint& pt) {
    if (pt.c.norm() > cfg.eps_final) {
      return false;
    }
    return kkt_residual(pt.g, pt.J).residual <= cfg.eps_final;
  };

  InnerHooks hooks;
  hooks.deadline = deadline;
  if (cfg.inner_kkt_exit) {
    hooks.early_stop = kkt_passes;
  }
  int outer_k = 0;
  if (observer.on_inner) {
    hooks.on_iteration = [&](const InnerTrace& tr) { observer.on_inner(outer_k, tr); };
  }

  int infeasible_streak = 0;
  rep.status = SolveStatus::MaxIter;
  for (int k = 0;; ++k) {
    outer_k = k;
    rep.outer_iters = k;
    if (kkt_passes(mp)) {
      rep.status = SolveStatus::FirstOrder;
      break;
    }
    if (k >= cfg.max_outer || rep.total_inner_iters >= cfg.max_total_inner) {
      rep.status = SolveStatus::MaxIter;
      break;
    }
    if (clock::now() >= deadline) {
      rep.status = SolveStatus::TimeLimit;
      break;
    }

    InnerConfig icfg = inner;
    icfg.sigma_min = cfg.beta4;
    icfg.max_inner = static_cast<int>(
        std::min<long>(inner.max_inner, cfg.max_total_inner - rep.total_inner_iters));
    const double sigma0 = std::max(cfg.beta3 * tau, cfg.beta4);
    InnerResult ir = qn ? r2n_solve(cp, mp, tau, eps, sigma0, icfg, *qn, hooks)
                        : r2_solve(cp, mp, tau, eps, sigma0, icfg, hooks);
    rep.total_inner_iters += ir.inner_iters;
    mp = std::move(ir.point);

    const double theta_sqrt = std::sqrt(theta_measure(mp.c, mp.J).value);
    const double c_norm = mp.c.norm();
    if (observer.on_outer) {
      OuterTrace tr;
      tr.k = k;
      tr.tau = tau;
      tr.eps = eps;
      tr.theta_sqrt = theta_sqrt;
      tr.kkt_residual = kkt_residual(mp.g, mp.J).residual;
      tr.c_norm = c_norm;
      tr.inner_iters = ir.inner_iters;
      tr.inner_status = ir.status;
      observer.on_outer(tr);
    }
    if (ir.status == InnerStatus::TimeLimit) {
      rep.outer_iters = k + 1;
      rep.status = SolveStatus::TimeLimit;
      break;
    }

    // Linearized feasibility stationary while c stays away from zero.
    const bool stuck = eps <= cfg.eps_final && theta_sqrt <= cfg.eps_final &&
                       c_norm > cfg.eps_final && !kkt_passes(mp);
    infeasible_streak = stuck ? infeasible_streak + 1 : 0;

    if (theta_sqrt > eps) {
      tau += cfg.beta1;
    } else {
      eps = std::max(cfg.beta2 * eps, cfg.eps_final);
    }
    mp.tau = tau;

    if (infeasible_streak >= cfg.infeasible_patience) {
      rep.outer_iters = k + 1;
      rep.status = SolveStatus::InfeasibleStationary;
      break;
    }
  }

  // Final certificate from fresh, uncounted evaluations.
  rep.x = mp.x;
  const KktResult kkt = kkt_residual(p, mp.x);
  const Vector c = p.eval_c(mp.x);
  rep.y_ls = kkt.y_ls;
  rep.kkt_residual = kkt.residual;
  rep.feasibility = c.norm();
  rep.theta_final = theta(c, p.jac(mp.x));
  rep.tau_final = tau;
  rep.wall_time_s = std::chrono::duration<double>(clock::now() - start).count();
  return rep;
}

}  // namespace exactpen
