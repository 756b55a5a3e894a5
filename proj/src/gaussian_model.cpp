#include "mmse_kl/gaussian_model.hpp"

#include <cmath>
#include <utility>

namespace mmse_kl {

namespace {

void symmetrize(Matrix& a) { a = ((a + a.transpose()) * 0.5).eval(); }

// Smallest eigenvalue must not be below -tol relative to the largest scale.
void require_psd(const Matrix& a, double rel_tol, const char* what) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EigenFailure("eigensolver did not converge");
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -rel_tol * scale) {
    throw NotPositiveDefinite(what);
  }
}

}  // namespace

GaussianReference::GaussianReference(Vector mean, Matrix cov, Index k, Index m)
    : mean_(std::move(mean)), cov_(std::move(cov)), k_(k), m_(m) {
  if (k_ < 1 || m_ < 1) throw DimensionMismatch("k and m must be >= 1");
  if (mean_.size() != k_ + m_) throw DimensionMismatch("mean must have length k+m");
  if (cov_.rows() != k_ + m_ || cov_.cols() != k_ + m_) {
    throw DimensionMismatch("cov must be (k+m) x (k+m)");
  }
  if (!mean_.allFinite() || !cov_.allFinite()) {
    throw DomainError("mean and cov must be finite");
  }
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * scale) throw AsymmetricInput("cov asymmetry exceeds 1e-8 relative");
  symmetrize(cov_);

  Eigen::LLT<Matrix> llt_c(block_c());
  if (llt_c.info() != Eigen::Success) {
    throw NotPositiveDefinite("output block C is not positive definite");
  }
  require_psd(cov_, 1e-10, "cov is not positive semidefinite");
}

MmseMatrix::MmseMatrix(Matrix xi) : xi_(std::move(xi)) {
  if (xi_.rows() != xi_.cols()) throw DimensionMismatch("Xi must be square");
  symmetrize(xi_);
  require_psd(xi_, 1e-10, "Xi is not positive semidefinite");
}

Spectrum::Spectrum(Vector eigenvalues) : values_(std::move(eigenvalues)) {
  if (values_.size() < 1) throw DimensionMismatch("spectrum must be nonempty");
  for (Index i = 0; i < values_.size(); ++i) {
    if (values_[i] < 0.0) throw DomainError("spectrum entries must be >= 0");
    if (i > 0 && values_[i] > values_[i - 1]) {
      throw DomainError("spectrum must be nonincreasing");
    }
  }
}

LinearEstimator::LinearEstimator(Matrix gain, Vector input_mean, Vector output_mean)
    : gain_(std::move(gain)),
      input_mean_(std::move(input_mean)),
      output_mean_(std::move(output_mean)) {
  if (gain_.rows() != input_mean_.size() || gain_.cols() != output_mean_.size()) {
    throw DimensionMismatch("gain shape must match mean lengths");
  }
}

Vector LinearEstimator::apply(const Vector& y) const {
  if (y.size() != output_mean_.size()) throw DimensionMismatch("y must have length m");
  return input_mean_ + gain_ * (y - output_mean_);
}

GaussianReference partition_reference(const Vector& mean, const Matrix& cov,
                                      Index k, Index m) {
  return GaussianReference(mean, cov, k, m);
}

MmseMatrix schur_complement(const GaussianReference& ref) {
  Eigen::LLT<Matrix> llt_c(ref.block_c());
  if (llt_c.info() != Eigen::Success) {
    throw NotPositiveDefinite("output block C is not positive definite");
  }
  Matrix xi = ref.block_a() - ref.block_b() * llt_c.solve(ref.block_b().transpose());
  return MmseMatrix(std::move(xi));
}

Spectrum spectrum(const MmseMatrix& xi) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(xi.value(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EigenFailure("eigensolver did not converge");
  Vector vals = es.eigenvalues().reverse();
  const double clamp_tol = 1e-10 * std::max(1.0, vals.cwiseAbs().maxCoeff());
  for (Index i = 0; i < vals.size(); ++i) {
    if (vals[i] < 0.0) {
      if (vals[i] < -clamp_tol) throw NotPositiveDefinite("Xi eigenvalue below roundoff tolerance");
      vals[i] = 0.0;
    }
  }
  return Spectrum(std::move(vals));
}

LinearEstimator lmmse_estimator(const GaussianReference& ref) {
  Eigen::LLT<Matrix> llt_c(ref.block_c());
  if (llt_c.info() != Eigen::Success) {
    throw NotPositiveDefinite("output block C is not positive definite");
  }
  Matrix gain = llt_c.solve(ref.block_b().transpose()).transpose();
  return LinearEstimator(std::move(gain), ref.input_mean(), ref.output_mean());
}

double gaussian_mmse(const GaussianReference& ref) {
  return schur_complement(ref).value().trace();
}

Matrix least_favorable_cov(const GaussianReference& ref, double gamma) {
  const MmseMatrix xi = schur_complement(ref);
  const Spectrum spec = spectrum(xi);
  const double xi_max = spec.largest();
  if (xi_max > 0.0 && gamma <= -1.0 / xi_max) {
    throw GammaOutOfRange("gamma must exceed -1/xi_max");
  }
  Matrix result = ref.cov();
  if (gamma == 0.0 || xi_max == 0.0) return result;

  const Index k = ref.k();
  Matrix shift = Matrix::Identity(k, k) + gamma * xi.value();
  Eigen::LLT<Matrix> llt(shift);
  if (llt.info() != Eigen::Success) {
    throw GammaOutOfRange("I + gamma Xi is not positive definite");
  }
  Matrix middle = xi.value() * llt.solve(xi.value());
  symmetrize(middle);
  result.topLeftCorner(k, k) -= gamma * middle;
  symmetrize(result);
  return result;
}

double gaussian_kl(const Vector& mean1, const Matrix& cov1,
                   const Vector& mean0, const Matrix& cov0) {
  const Index d = mean0.size();
  if (mean1.size() != d || cov0.rows() != d || cov0.cols() != d ||
      cov1.rows() != d || cov1.cols() != d) {
    throw DimensionMismatch("gaussian_kl argument shapes disagree");
  }
  Eigen::LLT<Matrix> llt0(cov0);
  if (llt0.info() != Eigen::Success) {
    throw NotPositiveDefinite("reference covariance is not positive definite");
  }
  Eigen::LLT<Matrix> llt1(cov1);
  if (llt1.info() != Eigen::Success) {
    throw NotPositiveDefinite("covariance is not positive definite");
  }

  const double trace_term = llt0.solve(cov1).trace();
  const Vector delta = mean1 - mean0;
  const double maha = delta.dot(llt0.solve(delta));
  double log_det0 = 0.0, log_det1 = 0.0;
  for (Index i = 0; i < d; ++i) {
    log_det0 += 2.0 * std::log(llt0.matrixLLT()(i, i));
    log_det1 += 2.0 * std::log(llt1.matrixLLT()(i, i));
  }
  double kl = 0.5 * (trace_term - static_cast<double>(d) + maha - (log_det1 - log_det0));
  // Roundoff can push identical or near-identical inputs a hair negative.
  if (kl < 0.0 && kl > -1e-12 * std::max(1.0, static_cast<double>(d))) kl = 0.0;
  return kl;
}

Vector apply_estimator(const LinearEstimator& est, const Vector& y) {
  return est.apply(y);
}

}  // namespace mmse_kl
