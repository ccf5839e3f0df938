#include <exactpen/subsolvers.hpp>

#include <cmath>
#include <limits>

namespace exactpen {

void validate(const InnerConfig& cfg) {
  if (!(cfg.eta1 > 0.0 && cfg.eta1 < 1.0) || !(cfg.eta2 >= cfg.eta1 && cfg.eta2 < 1.0)) {
    throw InputError("InnerConfig: need 0 < eta1 <= eta2 < 1");
  }
  if (!(cfg.gamma1 > 1.0) || !(cfg.gamma3 > 0.0 && cfg.gamma3 <= 1.0)) {
    throw InputError("InnerConfig: need gamma1 > 1 and 0 < gamma3 <= 1");
  }
  if (!(cfg.sigma_min > 0.0) || cfg.max_inner < 0) {
    throw InputError("InnerConfig: need sigma_min > 0 and max_inner >= 0");
  }
  if (!(cfg.theta_param > 0.0 && cfg.theta_param < 1.0)) {
    throw InputError("InnerConfig: need 0 < theta_param < 1");
  }
}

QuasiNewtonOp make_quasi_newton(const InnerConfig& cfg, Eigen::Index n) {
  return QuasiNewtonOp(cfg.qn_kind == QnKind::LSR1 ? QuasiNewtonKind::LSR1 : QuasiNewtonKind::LBFGS,
                       n, cfg.qn_memory);
}

const char* to_string(InnerStatus status) {
  switch (status) {
    case InnerStatus::FirstOrder:
      return "first_order";
    case InnerStatus::MaxIter:
      return "max_iter";
    case InnerStatus::Stalled:
      return "stalled";
    case InnerStatus::TimeLimit:
      return "time_limit";
  }
  return "unknown";
}

namespace {

struct Trial {
  Vector step;
  int prox_iters = 0;
};

// Shared R2 / R2N loop. `op` is null for R2.
InnerResult regularized_solve(const CountedProblem& p, const ModelPoint& start, double tau,
                              double eps_k, double sigma0, const InnerConfig& cfg,
                              QuasiNewtonOp* op, const InnerHooks& hooks) {
  validate(cfg);
  if (!(tau > 0.0) || !(eps_k > 0.0)) {
    throw InputError("inner solver: tau and eps_k must be positive");
  }
  if (!(sigma0 >= cfg.sigma_min)) {
    throw InputError("inner solver: sigma0 must be at least sigma_min");
  }

  InnerResult res;
  res.point = start;
  res.point.tau = tau;
  ModelPoint& mp = res.point;
  double sigma = sigma0;
  double merit = penalty_objective(mp);
  bool check_early = static_cast<bool>(hooks.early_stop);

  while (true) {
    if (check_early && hooks.early_stop(mp)) {
      res.status = InnerStatus::FirstOrder;
      res.early_stop = true;
      break;
    }
    check_early = false;

    // Stationarity measure: σ for R2, (σ + ‖B‖)/θ for R2N.
    const double sigma_xi = op == nullptr ? sigma : (sigma + op->norm_estimate()) / cfg.theta_param;
    const XiResult xr = xi(mp, sigma_xi, cfg.prox);
    res.xi_final = xr.value;
    res.statistic_final = xr.statistic;
    if (xr.statistic <= eps_k) {
      res.status = InnerStatus::FirstOrder;
      break;
    }
    if (xr.value <= kMachineEps) {
      res.status = InnerStatus::Stalled;
      break;
    }
    if (res.inner_iters >= cfg.max_inner) {
      res.status = InnerStatus::MaxIter;
      break;
    }
    if (hooks.deadline && std::chrono::steady_clock::now() >= *hooks.deadline) {
      res.status = InnerStatus::TimeLimit;
      break;
    }

    Trial trial;
    if (op == nullptr) {
      trial.step = xr.step;
      trial.prox_iters = xr.prox.newton_iters;
    } else {
      // ½sᵀ(B + σI)s + gᵀs + ψ_τ(s)  ≡  prox with ν = σ⁻¹, w = −νg, Q = I + νB.
      ProxQuery q;
      q.A = mp.J;
      q.b = mp.c;
      q.nu = 1.0 / sigma;
      q.w = -q.nu * mp.g;
      q.tau = tau;
      q.curvature = op;
      q.nu_B = q.nu;
      try {
        const ProxResult pr = prox_l2_quadratic(q, cfg.prox);
        trial.step = pr.u;
        trial.prox_iters = pr.newton_iters;
      } catch (const IndefiniteCurvatureError&) {
        // The regularized model must stay convex: raise σ and retry.
        if (++res.curvature_retries > cfg.max_curvature_retries) {
          throw;
        }
        sigma *= cfg.gamma1;
        continue;
      }
    }

    const Vector x_trial = mp.x + trial.step;
    const double f_trial = p.f(x_trial);
    const Vector c_trial = p.cons(x_trial);
    ++res.inner_iters;
    const double merit_trial = f_trial + tau * c_trial.norm();
    const double decrease = merit - merit_trial;
    double rho = decrease / xr.value;
    if (!std::isfinite(merit_trial) || !std::isfinite(rho)) {
      rho = -std::numeric_limits<double>::infinity();
    }
    const bool accepted = rho >= cfg.eta1;

    if (hooks.on_iteration) {
      InnerTrace tr;
      tr.j = res.inner_iters;
      tr.tau = tau;
      tr.f = mp.f;
      tr.c_norm = mp.c.norm();
      tr.xi = xr.value;
      tr.sigma = sigma;
      tr.rho = rho;
      tr.accepted = accepted;
      tr.prox_iters = trial.prox_iters;
      tr.decrease = decrease;
      const double s2 = trial.step.squaredNorm();
      tr.model_error = s2 > 0.0 ? std::abs(merit_trial - model_value(mp, trial.step)) / s2 : 0.0;
      hooks.on_iteration(tr);
    }

    if (accepted) {
      Vector g_trial = p.grad(x_trial);
      if (op != nullptr) {
        op->update(trial.step, g_trial - mp.g);
      }
      mp.x = x_trial;
      mp.f = f_trial;
      mp.g = std::move(g_trial);
      mp.c = c_trial;
      mp.J = p.jac(x_trial);
      merit = merit_trial;
      ++res.accepted_steps;
      check_early = static_cast<bool>(hooks.early_stop);
    }

    if (rho < cfg.eta1) {
      sigma *= cfg.gamma1;
    } else if (rho >= cfg.eta2) {
      sigma = std::max(cfg.sigma_min, cfg.gamma3 * sigma);
    }
  }
  res.sigma_final = sigma;
  return res;
}

}  // namespace

InnerResult r2_solve(const CountedProblem& p, const ModelPoint& start, double tau, double eps_k,
                     double sigma0, const InnerConfig& cfg, const InnerHooks& hooks) {
  return regularized_solve(p, start, tau, eps_k, sigma0, cfg, nullptr, hooks);
}

InnerResult r2_solve(const CountedProblem& p, const Vector& x_start, double tau, double eps_k,
                     double sigma0, const InnerConfig& cfg, const InnerHooks& hooks) {
  return r2_solve(p, evaluate_point(p, x_start, tau), tau, eps_k, sigma0, cfg, hooks);
}

InnerResult r2n_solve(const CountedProblem& p, const ModelPoint& start, double tau, double eps_k,
                      double sigma0, const InnerConfig& cfg, QuasiNewtonOp& op,
                      const InnerHooks& hooks) {
  if (op.dim() != p.n()) {
    throw InputError("r2n_solve: quasi-Newton operator has wrong dimension");
  }
  return regularized_solve(p, start, tau, eps_k, sigma0, cfg, &op, hooks);
}

InnerResult r2n_solve(const CountedProblem& p, const Vector& x_start, double tau, double eps_k,
                      double sigma0, const InnerConfig& cfg, const InnerHooks& hooks) {
  if (cfg.qn_kind == QnKind::None) {
    throw InputError("r2n_solve: qn_kind must be LBFGS or LSR1");
  }
  QuasiNewtonOp op = make_quasi_newton(cfg, p.n());
  return r2n_solve(p, evaluate_point(p, x_start, tau), tau, eps_k, sigma0, cfg, op, hooks);
}

}  // namespace exactpen
