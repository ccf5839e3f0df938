#pragma once

#include <exactpen/types.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace exactpen {

/// Equality-constrained nonlinear program
///
///     minimize f(x)  subject to  c(x) = 0,
///
/// with f: R^n -> R and c: R^n -> R^m given by callbacks together with their
/// first derivatives. Jacobians are dense m x n matrices.
struct Problem {
  std::string name;
  int n = 0;
  int m = 0;
  Vector x0;

  std::function<double(const Vector&)> eval_f;
  std::function<Vector(const Vector&)> grad_f;
  std::function<Vector(const Vector&)> eval_c;
  std::function<Matrix(const Vector&)> jac;

  /// Known solution and multipliers, when available (used by tests only).
  std::optional<Vector> x_star;
  std::optional<double> f_star;
  /// False for problems constructed to have no feasible point.
  bool feasible = true;
};

struct EvalCounters {
  long n_f = 0;
  long n_grad = 0;
  long n_c = 0;
  long n_jac = 0;

  friend bool operator==(const EvalCounters&, const EvalCounters&) = default;
};

/// Wraps a Problem so that every callback invocation is counted and every
/// returned object is shape-checked. Not thread-safe; use one per solve.
class CountedProblem {
 public:
  CountedProblem(const Problem& problem, EvalCounters& counters)
      : problem_(&problem), counters_(&counters) {}

  const Problem& problem() const { return *problem_; }
  int n() const { return problem_->n; }
  int m() const { return problem_->m; }

  double f(const Vector& x) const;
  Vector grad(const Vector& x) const;
  Vector cons(const Vector& x) const;
  Matrix jac(const Vector& x) const;

  const EvalCounters& counters() const { return *counters_; }

 private:
  void check_input(const Vector& x) const;

  const Problem* problem_;
  EvalCounters* counters_;
};

enum class DerivativeKind { Gradient, Jacobian };

struct DerivativeViolation {
  DerivativeKind kind;
  int row;  // constraint index for Jacobian entries, 0 for gradient entries
  int col;
  double analytic;
  double finite_difference;
  double relative_error;
};

/// Compares grad_f and jac against central differences with step
/// cbrt(eps) * (1 + |x_i|). One record per entry whose relative error
/// |a - d| / max(1, |a|, |d|) exceeds tol.
std::vector<DerivativeViolation> verify_derivatives(const Problem& p, const Vector& x, double tol);

/// Checks dimensions and callbacks; throws InputError on inconsistency.
void validate_problem(const Problem& p);

/// Dense quadratic program  min ½ xᵀQx + gᵀx  s.t.  Ax + b = 0.
struct QuadraticProgram {
  Matrix Q;
  Vector g;
  Matrix A;
  Vector b;
  Vector x0;
};

Problem make_qp_problem(std::string name, QuadraticProgram qp);

/// Reads the JSON QP format {"Q": [[...]], "g": [...], "A": [[...]], "b": [...], "x0": [...]}.
QuadraticProgram load_qp_json(const std::string& path);
QuadraticProgram parse_qp_json(const std::string& text);

}  // namespace exactpen
