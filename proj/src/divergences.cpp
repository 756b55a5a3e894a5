#include "mmse_kl/divergences.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "mmse_kl/bounds.hpp"
#include "mmse_kl/quadrature.hpp"

namespace mmse_kl {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

double lgamma_ratio(double num, double den) {
  return std::exp(std::lgamma(num) - std::lgamma(den));
}

}  // namespace

GGChannelSpec::GGChannelSpec(double a_, double p_, double b_, double q_)
    : a(a_), p(p_), b(b_), q(q_) {
  if (!(a > 0.0) || !(p > 0.0) || !(b > 0.0) || !(q > 0.0)) {
    throw DomainError("GG channel parameters must be strictly positive");
  }
}

BallChannelSpec::BallChannelSpec(Vector c_, double r_) : c(std::move(c_)), r(r_) {
  if (c.size() < 1) throw DomainError("ball channel requires K >= 1");
  if (!(r > 0.0)) throw DomainError("ball radius must be positive");
  if (!(c.minCoeff() > r)) {
    throw DomainError("ball must lie in the positive orthant (c_k > r)");
  }
}

MmseMatrix additive_mmse_matrix(const Matrix& sigma_x, const Matrix& sigma_n) {
  const Index k = sigma_x.rows();
  if (sigma_x.cols() != k || sigma_n.rows() != k || sigma_n.cols() != k) {
    throw DimensionMismatch("input and noise covariances must be square and equal size");
  }
  Eigen::LLT<Matrix> llt(((sigma_x + sigma_n + sigma_x.transpose() + sigma_n.transpose()) * 0.5).eval());
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("Sigma_X + Sigma_N is not positive definite");
  }
  Matrix xi = sigma_x * llt.solve(sigma_n);
  return MmseMatrix(std::move(xi));
}

double gg_best_sigma(double a, double p) {
  if (!(a > 0.0) || !(p > 0.0)) throw DomainError("gg_best_sigma requires a, p > 0");
  return a * a * std::exp(std::lgamma(3.0 / p) - std::lgamma(1.0 / p));
}

double gg_divergence(double p) {
  if (!(p > 0.0)) throw DomainError("gg_divergence requires p > 0");
  const double lg1p = std::lgamma(1.0 / p);
  return std::log(p) - 0.5 * std::log(2.0) +
         0.5 * (std::lgamma(3.0 / p) - lg1p) + std::lgamma(0.5) - lg1p + 0.5 -
         1.0 / p;
}

NonGaussianity gg_joint_nongaussianity(double p, double q) {
  return NonGaussianity(gg_divergence(p), gg_divergence(q));
}

double gg_lower_bound(const GGChannelSpec& spec) {
  const double sx2 = gg_best_sigma(spec.a, spec.p);
  const double sn2 = gg_best_sigma(spec.b, spec.q);
  const double d = gg_joint_nongaussianity(spec.p, spec.q).epsilon;
  return omega(0, d) * sx2 * sn2 / (sx2 + sn2);
}

double gg_fisher_information(double a, double p) {
  if (!(a > 0.0) || !(p > 0.0)) throw DomainError("gg_fisher_information requires a, p > 0");
  if (p <= 0.5) return std::numeric_limits<double>::infinity();
  return (p * p) / (a * a) *
         std::exp(std::lgamma(2.0 - 1.0 / p) - std::lgamma(1.0 / p));
}

double gg_crb(const GGChannelSpec& spec) {
  const double ix = gg_fisher_information(spec.a, spec.p);
  const double in = gg_fisher_information(spec.b, spec.q);
  if (std::isinf(ix) || std::isinf(in)) return 0.0;
  return 1.0 / (ix + in);
}

double uniform_ball_divergence(int k) {
  if (k < 1) throw DomainError("uniform_ball_divergence requires K >= 1");
  const double kk = static_cast<double>(k);
  return 0.5 * kk - 0.5 * kk * std::log(0.5 * (kk + 2.0)) +
         std::lgamma(0.5 * (kk + 2.0));
}

double ball_marginal_pdf(double x, double ck, double r, int k) {
  if (!(r > 0.0)) throw DomainError("ball_marginal_pdf requires r > 0");
  if (k < 1) throw DomainError("ball_marginal_pdf requires K >= 1");
  const double t = (x - ck) / r;
  const double u = t * t;
  if (u > 1.0) return 0.0;
  const double b = 0.5 * (k + 1.0);
  const double beta_pdf = b * std::pow(1.0 - u, b - 1.0);
  return lgamma_ratio(0.5 * (k + 2.0), 0.5 * (k + 3.0)) / (std::sqrt(kPi) * r) *
         beta_pdf;
}

double h_integral(double a, double b) {
  if (!(b > 0.0)) throw DomainError("h_integral requires b > 0");
  if (a < 0.0 || a > 1.0 - 1e-12) {
    throw DomainError("h_integral requires 0 <= a <= 1 - 1e-12");
  }
  if (a == 0.0) return 0.0;
  const double tol = 1e-10;
  const auto f = [a, b](double x) {
    return std::log1p(a * x) * std::pow(1.0 - x * x, b - 1.0);
  };
  if (b >= 1.0) return integrate(f, -1.0, 1.0, tol);

  // (1 - x^2)^{b-1} is endpoint singular for b < 1. Substituting
  // u = (1 -+ x)^b flattens it: dx (1 -+ x)^{b-1} = du / b.
  const double split = 0.5;
  const double mid = integrate(f, -split, split, tol / 3.0);
  const auto right = [a, b](double u) {
    const double one_minus_x = std::pow(u, 1.0 / b);
    const double x = 1.0 - one_minus_x;
    return std::log1p(a * x) * std::pow(1.0 + x, b - 1.0) / b;
  };
  const auto left = [a, b](double u) {
    const double one_plus_x = std::pow(u, 1.0 / b);
    const double x = one_plus_x - 1.0;
    return std::log1p(a * x) * std::pow(1.0 - x, b - 1.0) / b;
  };
  const double u_max = std::pow(1.0 - split, b);
  return mid + integrate(right, 0.0, u_max, tol / 3.0) +
         integrate(left, 0.0, u_max, tol / 3.0);
}

double ball_log_second_moment(double ck, double r, int k, LogMomentMethod method) {
  if (!(r > 0.0) || k < 1) throw DomainError("ball_log_second_moment requires r > 0, K >= 1");
  if (!(ck > r)) throw DomainError("ball_log_second_moment requires c_k > r");
  if (method == LogMomentMethod::affine_bound) {
    return std::log(ck * ck - r * r);
  }
  return std::log(ck * ck) +
         2.0 / std::sqrt(kPi) * lgamma_ratio(0.5 * (k + 2.0), 0.5 * (k + 1.0)) *
             h_integral(r / ck, 0.5 * (k + 1.0));
}

NonGaussianity mult_channel_epsilon(const BallChannelSpec& spec,
                                    LogMomentMethod method) {
  const int k = spec.k();
  double channel = 0.0;
  for (int i = 0; i < k; ++i) {
    const double ck = spec.c[i];
    const double log_ex2 = std::log(ck * ck + spec.r * spec.r / (k + 2.0));
    channel += 0.5 * (log_ex2 - ball_log_second_moment(ck, spec.r, k, method));
  }
  return NonGaussianity(uniform_ball_divergence(k), channel);
}

std::pair<double, double> mult_channel_bounds(const BallChannelSpec& spec,
                                              LogMomentMethod method) {
  const double kk = static_cast<double>(spec.k());
  const double upper = kk * spec.r * spec.r / (kk + 2.0);
  const double eps = mult_channel_epsilon(spec, method).epsilon;
  return {omega(0, eps / kk) * upper, upper};
}

double gg_entropy(double a, double p) {
  if (!(a > 0.0) || !(p > 0.0)) throw DomainError("gg_entropy requires a, p > 0");
  return std::log(2.0 * a) + std::lgamma(1.0 / p) - std::log(p) + 1.0 / p;
}

double low_snr_floor(double h_x, int k) {
  if (k < 1) throw DomainError("low_snr_floor requires K >= 1");
  return std::exp(2.0 * h_x / static_cast<double>(k)) /
         (2.0 * kPi * std::exp(1.0));
}

}  // namespace mmse_kl
