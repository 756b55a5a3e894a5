#pragma once

#include <utility>

#include "mmse_kl/gaussian_model.hpp"

namespace mmse_kl {

/// Additive channel Y = X + N with X ~ GG(a, p) and N ~ GG(b, q), where
/// GG(a, p) has density proportional to exp(-(|x|/a)^p).
struct GGChannelSpec {
  double a;
  double p;
  double b;
  double q;

  GGChannelSpec(double a_, double p_, double b_, double q_);
};

/// Multiplicative channel Y = X .* N with N standard normal and X uniform
/// on the ball of radius r around c. Requires c_k > r so the ball stays in
/// the positive orthant.
struct BallChannelSpec {
  Vector c;
  double r;

  BallChannelSpec(Vector c_, double r_);
  int k() const { return static_cast<int>(c.size()); }
};

/// KL divergence to the best Gaussian approximation, split into the input
/// contribution and the noise/channel contribution.
struct NonGaussianity {
  double input_part = 0.0;
  double channel_part = 0.0;
  double epsilon = 0.0;  // input_part + channel_part

  NonGaussianity(double input, double channel)
      : input_part(input), channel_part(channel), epsilon(input + channel) {}
};

enum class LogMomentMethod { exact, affine_bound };

/// Xi = Sigma_X (Sigma_X + Sigma_N)^{-1} Sigma_N for the additive channel.
MmseMatrix additive_mmse_matrix(const Matrix& sigma_x, const Matrix& sigma_n);

/// Variance of GG(a, p): a^2 Gamma(3/p) / Gamma(1/p). This is also the
/// variance of the KL-closest zero-mean Gaussian.
double gg_best_sigma(double a, double p);

/// d_G(p): KL divergence from GG(., p) to its moment-matched Gaussian.
/// Scale-free, nonnegative, zero exactly at p = 2.
double gg_divergence(double p);

/// Joint non-Gaussianity of the additive GG channel: d_G(p) + d_G(q).
NonGaussianity gg_joint_nongaussianity(double p, double q);

/// Scalar lower bound omega_0(d_G(p) + d_G(q)) * sx2 sn2 / (sx2 + sn2).
double gg_lower_bound(const GGChannelSpec& spec);

/// Fisher information of GG(a, p); +infinity for p <= 1/2.
double gg_fisher_information(double a, double p);

/// Bayesian Cramer-Rao bound 1 / (I_input + I_noise); 0 when either Fisher
/// information is infinite.
double gg_crb(const GGChannelSpec& spec);

/// d_U(K): KL divergence from the uniform ball distribution to its
/// moment-matched Gaussian, K/2 - (K/2) log((K+2)/2) + lgamma((K+2)/2).
double uniform_ball_divergence(int k);

/// Marginal density of one coordinate of the uniform ball distribution.
double ball_marginal_pdf(double x, double ck, double r, int k);

/// E[log X_k^2] for the ball-uniform input, either exactly via the
/// H integral or via the affine lower bound log(ck^2 - r^2).
double ball_log_second_moment(double ck, double r, int k, LogMomentMethod method);

/// Non-Gaussianity of the multiplicative channel: d_U(K) plus half the sum
/// of per-coordinate log-moment gaps log E[X_k^2] - E[log X_k^2].
NonGaussianity mult_channel_epsilon(const BallChannelSpec& spec,
                                    LogMomentMethod method);

/// (lower, upper) MMSE bounds for the multiplicative channel:
/// upper = K r^2 / (K+2), lower = omega_0(eps_K / K) * upper.
std::pair<double, double> mult_channel_bounds(const BallChannelSpec& spec,
                                              LogMomentMethod method);

/// H(a, b) = integral_{-1}^{1} log(1 + a x) (1 - x^2)^{b-1} dx, a in (0, 1).
double h_integral(double a, double b);

/// Differential entropy of GG(a, p) in nats.
double gg_entropy(double a, double p);

/// Low-SNR MMSE floor exp(2 h / K) / (2 pi e).
double low_snr_floor(double h_x, int k);

}  // namespace mmse_kl
