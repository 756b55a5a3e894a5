#pragma once

#include <Eigen/Dense>

#include "mmse_kl/errors.hpp"

namespace mmse_kl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Block-partitioned Gaussian reference N(mu0, Sigma0) for a joint
/// input-output vector (X, Y) with dim(X) = k and dim(Y) = m. The
/// covariance is partitioned as
///
///     Sigma0 = [ A  B  ]
///              [ B' C  ]
///
/// where C (the output block) must be strictly positive definite and
/// Sigma0 itself positive semidefinite. The input matrix is symmetrized
/// before validation; asymmetry beyond 1e-8 relative is rejected.
class GaussianReference {
 public:
  GaussianReference(Vector mean, Matrix cov, Index k, Index m);

  const Vector& mean() const noexcept { return mean_; }
  const Matrix& cov() const noexcept { return cov_; }
  Index k() const noexcept { return k_; }
  Index m() const noexcept { return m_; }

  Vector input_mean() const { return mean_.head(k_); }
  Vector output_mean() const { return mean_.tail(m_); }
  Matrix block_a() const { return cov_.topLeftCorner(k_, k_); }
  Matrix block_b() const { return cov_.topRightCorner(k_, m_); }
  Matrix block_c() const { return cov_.bottomRightCorner(m_, m_); }

 private:
  Vector mean_;
  Matrix cov_;
  Index k_ = 0;
  Index m_ = 0;
};

/// Symmetric PSD matrix Xi = A - B C^{-1} B' (conditional input covariance).
/// Eigenvalues may be negative only within roundoff of zero.
class MmseMatrix {
 public:
  explicit MmseMatrix(Matrix xi);

  const Matrix& value() const noexcept { return xi_; }
  Index dim() const noexcept { return xi_.rows(); }

 private:
  Matrix xi_;
};

/// Nonnegative eigenvalues of an MmseMatrix, sorted descending.
class Spectrum {
 public:
  explicit Spectrum(Vector eigenvalues);

  const Vector& eigenvalues() const noexcept { return values_; }
  Index size() const noexcept { return values_.size(); }
  double sum() const { return values_.sum(); }
  double largest() const { return values_.size() > 0 ? values_[0] : 0.0; }
  /// Largest strictly positive eigenvalue; 0 if the spectrum is all zero.
  double largest_nonzero() const { return largest(); }

 private:
  Vector values_;
};

/// Affine estimator f(y) = input_mean + gain * (y - output_mean).
class LinearEstimator {
 public:
  LinearEstimator(Matrix gain, Vector input_mean, Vector output_mean);

  const Matrix& gain() const noexcept { return gain_; }
  const Vector& input_mean() const noexcept { return input_mean_; }
  const Vector& output_mean() const noexcept { return output_mean_; }

  Vector apply(const Vector& y) const;

 private:
  Matrix gain_;
  Vector input_mean_;
  Vector output_mean_;
};

/// Validates and assembles a block Gaussian reference from raw mean/cov.
GaussianReference partition_reference(const Vector& mean, const Matrix& cov,
                                      Index k, Index m);

/// Xi = A - B C^{-1} B', computed with a Cholesky solve and symmetrized.
MmseMatrix schur_complement(const GaussianReference& ref);

/// Descending eigenvalues of Xi; values in [-1e-10 * max(1, xi_max), 0)
/// are clamped to zero, anything more negative throws.
Spectrum spectrum(const MmseMatrix& xi);

/// Conditional-mean estimator of the reference, gain H = B C^{-1}.
LinearEstimator lmmse_estimator(const GaussianReference& ref);

/// tr(Xi), the MMSE attained under the reference distribution itself.
double gaussian_mmse(const GaussianReference& ref);

/// Covariance of the bound-attaining Gaussian:
///   Sigma_gamma = Sigma0 - gamma * blockdiag(Xi (I + gamma Xi)^{-1} Xi, 0).
/// Requires gamma > -1/xi_max so the perturbed block stays PSD.
Matrix least_favorable_cov(const GaussianReference& ref, double gamma);

/// KL divergence D(N(mean1, cov1) || N(mean0, cov0)) in nats.
double gaussian_kl(const Vector& mean1, const Matrix& cov1,
                   const Vector& mean0, const Matrix& cov0);

Vector apply_estimator(const LinearEstimator& est, const Vector& y);

}  // namespace mmse_kl
