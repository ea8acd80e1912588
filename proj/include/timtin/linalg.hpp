#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace timtin {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Incrementally grown orthonormal basis. Vectors are admitted only when their
/// residual against the current span exceeds the tolerance, which is what the
/// greedy span scan needs.
class SpanBasis {
 public:
  explicit SpanBasis(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return basis_.size(); }

  /// Component of v orthogonal to the current span (two passes of
  /// modified Gram-Schmidt).
  CVector residual(const CVector& v) const;

  /// Adds v when its normalized residual norm exceeds tol. Returns whether it
  /// was admitted.
  bool try_add(const CVector& v, double tol);

  const std::vector<CVector>& basis() const { return basis_; }

 private:
  std::size_t dim_;
  std::vector<CVector> basis_;
};

/// Unit-norm copy; returns nullopt for (numerically) zero input.
std::optional<CVector> normalized(const CVector& v, double min_norm = 1e-300);

/// log2 det of a Hermitian positive definite matrix.
double log2_det_hpd(const CMatrix& m);

}  // namespace timtin
