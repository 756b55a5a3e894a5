#pragma once

#include "mmse_kl/gaussian_model.hpp"

namespace mmse_kl {

// [Sigma]_ij = exp(-rate * |i - j|).  A standard stationary correlation
// model used by the bundled figure presets.
Matrix exp_correlation_covariance(Index k, double rate = 0.9);

// Joint covariance of (X, Y) for the additive model Y = X + N with
// independent X ~ N(0, sigma_x) and N ~ N(0, sigma_n):
//   [[Sigma_X, Sigma_X], [Sigma_X, Sigma_X + Sigma_N]].
// Both means are zero.
GaussianReference additive_reference(const Matrix& sigma_x,
                                     const Matrix& sigma_n);

// Scalar additive reference with input variance sigma_x2 and noise variance
// chosen so that the SNR sigma_x2 / sigma_n2 equals snr_db decibels.
GaussianReference scalar_snr_reference(double sigma_x2, double snr_db);

}  // namespace mmse_kl
