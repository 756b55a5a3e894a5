#include "mmse_kl/channel_models.hpp"

#include <cmath>

#include "mmse_kl/errors.hpp"

namespace mmse_kl {

Matrix exp_correlation_covariance(Index k, double rate) {
  if (k <= 0) throw DomainError("dimension must be positive");
  Matrix out(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      out(i, j) = std::exp(-rate * static_cast<double>(std::abs(i - j)));
    }
  }
  return out;
}

GaussianReference additive_reference(const Matrix& sigma_x,
                                     const Matrix& sigma_n) {
  if (sigma_x.rows() != sigma_x.cols() || sigma_n.rows() != sigma_n.cols() ||
      sigma_x.rows() != sigma_n.rows()) {
    throw DimensionMismatch("input and noise covariances must be square and equally sized");
  }
  const Index k = sigma_x.rows();
  Matrix cov(2 * k, 2 * k);
  cov.topLeftCorner(k, k) = sigma_x;
  cov.topRightCorner(k, k) = sigma_x;
  cov.bottomLeftCorner(k, k) = sigma_x;
  cov.bottomRightCorner(k, k) = sigma_x + sigma_n;
  return GaussianReference(Vector::Zero(2 * k), cov, k, k);
}

GaussianReference scalar_snr_reference(double sigma_x2, double snr_db) {
  if (!(sigma_x2 > 0.0)) throw DomainError("input variance must be positive");
  const double sigma_n2 = sigma_x2 / std::pow(10.0, snr_db / 10.0);
  Matrix sx(1, 1), sn(1, 1);
  sx(0, 0) = sigma_x2;
  sn(0, 0) = sigma_n2;
  return additive_reference(sx, sn);
}

}  // namespace mmse_kl
