#pragma once

#include <exactpen/types.hpp>

#include <deque>
#include <utility>

namespace exactpen {

/// Symmetric linear operator v ↦ Bv with known spectral bounds.
class SymmetricOperator {
 public:
  virtual ~SymmetricOperator() = default;
  virtual Eigen::Index dim() const = 0;
  virtual Vector apply(const Vector& v) const = 0;
  /// Smallest eigenvalue of B.
  virtual double min_eigenvalue() const = 0;
  /// Upper bound on ‖B‖₂.
  virtual double norm_estimate() const = 0;
};

/// Explicit symmetric matrix; spectral data computed once at construction.
class DenseSymmetricOperator final : public SymmetricOperator {
 public:
  explicit DenseSymmetricOperator(Matrix B);

  Eigen::Index dim() const override { return B_.rows(); }
  Vector apply(const Vector& v) const override { return B_ * v; }
  double min_eigenvalue() const override { return min_eig_; }
  double norm_estimate() const override { return norm_; }
  const Matrix& matrix() const { return B_; }

 private:
  Matrix B_;
  double min_eig_ = 0.0;
  double norm_ = 0.0;
};

enum class QuasiNewtonKind { LBFGS, LSR1 };

/// Limited-memory BFGS or SR1 approximation seeded with B₀ = I.
///
/// The operator is stored unrolled as B = I + U·diag(d)·Uᵀ with d ∈ {±1}ʳ,
/// rebuilt from the retained (s, y) pairs after every change. This keeps
/// apply at O(nr) and gives the exact spectrum of B from an r x r
/// eigenproblem.
class QuasiNewtonOp final : public SymmetricOperator {
 public:
  static constexpr double kSkipThreshold = 1e-8;

  QuasiNewtonOp(QuasiNewtonKind kind, Eigen::Index n, int memory = 5);

  Eigen::Index dim() const override { return n_; }
  Vector apply(const Vector& v) const override;
  double min_eigenvalue() const override { return min_eig_; }
  double norm_estimate() const override { return norm_; }

  /// Offers the pair (s, y). Returns false when the pair is skipped:
  /// LBFGS needs sᵀy > 1e-8‖s‖‖y‖, LSR1 needs |sᵀ(y − Bs)| > 1e-8‖s‖‖y − Bs‖.
  bool update(const Vector& s, const Vector& y);

  QuasiNewtonKind kind() const { return kind_; }
  int memory() const { return memory_; }
  const std::deque<std::pair<Vector, Vector>>& pairs() const { return pairs_; }

 private:
  void rebuild();
  void refresh_spectrum();

  QuasiNewtonKind kind_;
  Eigen::Index n_;
  int memory_;
  std::deque<std::pair<Vector, Vector>> pairs_;
  Matrix U_;
  Vector signs_;
  double min_eig_ = 1.0;
  double norm_ = 1.0;
};

/// Value-style update: returns op with (s, y) offered to it.
QuasiNewtonOp qn_update(QuasiNewtonOp op, const Vector& s, const Vector& y);

}  // namespace exactpen
