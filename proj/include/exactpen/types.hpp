#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>

namespace exactpen {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kMachineEps = std::numeric_limits<double>::epsilon();

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or non-finite input data.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A callback returned an object of the wrong dimension.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// A triangular factor with (numerically) zero diagonal entries was used in a solve.
class SingularFactorError : public Error {
 public:
  using Error::Error;
};

/// The secular-equation Newton iteration did not terminate.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

/// An iterative linear solver failed to reach its tolerance.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// The curvature operator makes I + nu*B indefinite.
class IndefiniteCurvatureError : public Error {
 public:
  using Error::Error;
};

inline bool all_finite(const Vector& v) { return v.allFinite(); }
inline bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace exactpen
