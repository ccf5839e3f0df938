#include <exactpen/krylov.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace exactpen {

// Follows the Paige–Saunders recurrences (SIAM J. Numer. Anal. 12, 1975) with
// the stopping rules of the reference Fortran implementation.
KrylovResult krylov_symmetric_solve(const LinearMap& apply, const Vector& rhs, double tol,
                                    int max_iter) {
  if (!(tol > 0.0)) {
    throw InputError("krylov_symmetric_solve: tolerance must be positive");
  }
  if (!all_finite(rhs)) {
    throw InputError("krylov_symmetric_solve: right-hand side has non-finite entries");
  }
  const Eigen::Index n = rhs.size();
  KrylovResult out;
  out.solution = Vector::Zero(n);

  const double beta1 = rhs.norm();
  if (beta1 == 0.0) {
    out.converged = true;
    out.stop = KrylovStop::ZeroRhs;
    return out;
  }

  Vector r1 = rhs;
  Vector r2 = rhs;
  Vector y = rhs;
  Vector w = Vector::Zero(n);
  Vector w1 = Vector::Zero(n);
  Vector w2 = Vector::Zero(n);
  Vector& x = out.solution;

  double oldb = 0.0;
  double beta = beta1;
  double dbar = 0.0;
  double epsln = 0.0;
  double phibar = beta1;
  double tnorm2 = 0.0;
  double gmax = 0.0;
  double gmin = std::numeric_limits<double>::max();
  double cs = -1.0;
  double sn = 0.0;
  bool eigenvector_rhs = false;
  bool stopped = false;

  int itn = 0;
  while (itn < max_iter) {
    ++itn;
    const Vector v = y / beta;
    y = apply(v);
    if (itn >= 2) {
      y -= (beta / oldb) * r1;
    }
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    oldb = beta;
    beta = r2.norm();
    tnorm2 += alfa * alfa + oldb * oldb + beta * beta;

    if (itn == 1 && beta / beta1 <= 10.0 * kMachineEps) {
      eigenvector_rhs = true;
    }

    // Apply the previous rotation, then build the next one.
    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double root = std::hypot(gbar, dbar);

    double gamma = std::max(std::hypot(gbar, beta), kMachineEps);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;

    gmax = std::max(gmax, gamma);
    gmin = std::min(gmin, gamma);

    const double anorm = std::sqrt(tnorm2);
    const double ynorm = x.norm();
    const double rnorm = phibar;
    const double test1 = (ynorm == 0.0 || anorm == 0.0)
                             ? std::numeric_limits<double>::infinity()
                             : rnorm / (anorm * ynorm);
    const double test2 =
        anorm == 0.0 ? std::numeric_limits<double>::infinity() : root / anorm;
    const double acond = gmax / gmin;
    out.iterations = itn;
    out.residual_estimate = rnorm;
    out.operator_norm_estimate = anorm;

    if (eigenvector_rhs) {
      out.stop = KrylovStop::RhsIsEigenvector;
      stopped = true;
    } else if (test1 <= tol || 1.0 + test1 <= 1.0) {
      out.stop = KrylovStop::ResidualSmall;
      stopped = true;
    } else if (test2 <= tol || 1.0 + test2 <= 1.0) {
      out.stop = KrylovStop::LeastSquaresSmall;
      stopped = true;
    } else if (anorm * ynorm * kMachineEps >= beta1) {
      out.stop = KrylovStop::SolutionStable;
      stopped = true;
    } else if (acond >= 0.1 / kMachineEps) {
      out.stop = KrylovStop::IllConditioned;
      stopped = true;
    }
    if (stopped) {
      break;
    }
  }
  if (!stopped) {
    out.stop = KrylovStop::MaxIterations;
  }
  out.converged = out.stop == KrylovStop::RhsIsEigenvector || out.stop == KrylovStop::ResidualSmall ||
                  out.stop == KrylovStop::LeastSquaresSmall || out.stop == KrylovStop::SolutionStable;
  return out;
}

}  // namespace exactpen
