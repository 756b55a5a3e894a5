#include "mmse_kl/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "mmse_kl/bounds.hpp"
#include "mmse_kl/channel_models.hpp"
#include "mmse_kl/divergences.hpp"
#include "mmse_kl/errors.hpp"
#include "mmse_kl/quadrature.hpp"
#include "mmse_kl/validation.hpp"

namespace mmse_kl {
namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

CheckResult check(std::string name, double measured, double threshold) {
  return CheckResult{std::move(name), measured, threshold,
                     measured <= threshold};
}

// log density of GG(a, p).
double gg_logpdf(double x, double a, double p) {
  return std::log(p) - std::log(2.0 * a) - std::lgamma(1.0 / p) -
         std::pow(std::abs(x) / a, p);
}

double normal_logpdf(double x, double mu, double sigma2) {
  const double d = x - mu;
  return -0.5 * std::log(2.0 * kPi * sigma2) - d * d / (2.0 * sigma2);
}

// Support half-width that captures both the GG density and its matched
// Gaussian to well below the quadrature tolerance.
double gg_support(double a, double p) {
  const double tail = a * std::pow(36.0, 1.0 / p);
  return tail + 12.0 * std::sqrt(gg_best_sigma(a, p));
}

double gg_divergence_numeric(double a, double p) {
  const double sigma2 = gg_best_sigma(a, p);
  const double lim = gg_support(a, p);
  return numeric_kl_1d([=](double x) { return gg_logpdf(x, a, p); },
                       [=](double x) { return normal_logpdf(x, 0.0, sigma2); },
                       -lim, lim);
}

double gg_entropy_numeric(double a, double p) {
  const double lim = gg_support(a, p);
  return integrate(
      [=](double x) {
        const double lp = gg_logpdf(x, a, p);
        return lp > -700.0 ? -std::exp(lp) * lp : 0.0;
      },
      -lim, lim, 1e-10);
}

// Batch column means and (co)variances.
Vector column_means(const Matrix& draws) {
  return draws.colwise().mean();
}

// z-score of a sample mean against a target using the sample variance.
double mean_z(const Vector& column, double target) {
  const auto n = static_cast<double>(column.size());
  const double mean = column.mean();
  const double var = (column.array() - mean).square().sum() / (n - 1.0);
  return std::abs(mean - target) / std::sqrt(var / n);
}

void run_kl(std::vector<CheckResult>& out) {
  out.push_back(
      check("kl/gg-divergence-zero-at-p2", std::abs(gg_divergence(2.0)), 1e-12));
  for (const double p : {0.5, 1.0, 4.0, 32.0}) {
    out.push_back(check("kl/gg-divergence-numeric-p" + num(p),
                        std::abs(gg_divergence(p) - gg_divergence_numeric(1.0, p)),
                        1e-6));
  }
  out.push_back(check(
      "kl/gg-divergence-scale-free",
      std::abs(gg_divergence(1.0) - gg_divergence_numeric(2.0, 1.0)), 1e-6));

  for (const double r : {1.0, 3.0}) {
    // Uniform on [-r, r] against its moment-matched normal N(0, r^2/3);
    // the result must not depend on r.
    const double sigma2 = r * r / 3.0;
    const double numeric = numeric_kl_1d(
        [=](double) { return -std::log(2.0 * r); },
        [=](double x) { return normal_logpdf(x, 0.0, sigma2); }, -r, r);
    out.push_back(check("kl/ball-1d-numeric-r" + num(r),
                        std::abs(numeric - uniform_ball_divergence(1)), 1e-6));
  }

  {
    const double mu1 = 0.3, s1 = 2.0;
    const double numeric = numeric_kl_1d(
        [=](double x) { return normal_logpdf(x, mu1, s1); },
        [=](double x) { return normal_logpdf(x, 0.0, 1.0); }, -25.0, 25.0);
    Vector m1(1), m0(1);
    m1 << mu1;
    m0 << 0.0;
    Matrix c1(1, 1), c0(1, 1);
    c1 << s1;
    c0 << 1.0;
    out.push_back(check("kl/gaussian-kl-numeric",
                        std::abs(gaussian_kl(m1, c1, m0, c0) - numeric), 1e-7));
  }
  {
    // Pure mean shift of one unit with identity covariances: KL = 1/2.
    Vector m1 = Vector::Zero(2), m0 = Vector::Zero(2);
    m1[0] = 1.0;
    const Matrix eye = Matrix::Identity(2, 2);
    out.push_back(check("kl/gaussian-kl-mean-shift",
                        std::abs(gaussian_kl(m1, eye, m0, eye) - 0.5), 1e-12));
  }

  out.push_back(check(
      "kl/gg-entropy-numeric-p0.8",
      std::abs(gg_entropy(1.3, 0.8) - gg_entropy_numeric(1.3, 0.8)), 1e-7));
  out.push_back(check(
      "kl/gg-entropy-numeric-p3",
      std::abs(gg_entropy(2.0, 3.0) - gg_entropy_numeric(2.0, 3.0)), 1e-7));
}

void run_mc(std::vector<CheckResult>& out, std::uint64_t seed) {
  {
    Vector mean(2);
    mean << 1.0, -2.0;
    Matrix cov(2, 2);
    cov << 2.0, 0.5, 0.5, 1.0;
    const std::size_t n = 500000;
    const SampleBatch batch = sample_gaussian(mean, cov, n, seed);
    double worst_mean = 0.0;
    for (Index j = 0; j < 2; ++j) {
      worst_mean = std::max(worst_mean, mean_z(batch.draws.col(j), mean[j]));
    }
    out.push_back(check("mc/gaussian-mean", worst_mean, 4.0));

    const Vector mu = column_means(batch.draws);
    const Matrix centered = batch.draws.rowwise() - mu.transpose();
    const Matrix sample_cov =
        centered.transpose() * centered / static_cast<double>(n - 1);
    out.push_back(check("mc/gaussian-cov",
                        (sample_cov - cov).cwiseAbs().maxCoeff(), 0.02));

    const SampleBatch again = sample_gaussian(mean, cov, n, seed);
    out.push_back(check("mc/reproducibility",
                        (batch.draws - again.draws).cwiseAbs().maxCoeff(), 0.0));
  }

  int tag = 0;
  for (const double p : {0.5, 4.0}) {
    const std::size_t n = 500000;
    const double a = p == 4.0 ? 1.5 : 1.0;
    const SampleBatch batch = sample_gg(a, p, n, seed + 17 + tag++);
    const Vector sq = batch.draws.col(0).array().square();
    out.push_back(check("mc/gg-variance-p" + num(p),
                        mean_z(sq, gg_best_sigma(a, p)), 3.0));
  }
  {
    const SampleBatch batch = sample_gg(1.0, 1.0, 500000, seed + 23);
    out.push_back(check("mc/gg-symmetry", mean_z(batch.draws.col(0), 0.0), 3.0));
  }

  {
    Vector c(3);
    c << 3.0, 4.0, 5.0;
    const double r = 1.0;
    const std::size_t n = 200000;
    const SampleBatch batch = sample_ball_uniform(c, r, n, seed + 29);
    const Matrix centered = batch.draws.rowwise() - c.transpose();
    const double max_radius = centered.rowwise().norm().maxCoeff();
    out.push_back(
        check("mc/ball-support", std::max(0.0, max_radius - r), 0.0));

    double worst = 0.0;
    for (Index j = 0; j < 3; ++j) {
      const Vector sq = batch.draws.col(j).array().square();
      worst = std::max(worst, mean_z(sq, c[j] * c[j] + r * r / 5.0));
    }
    out.push_back(check("mc/ball-second-moment", worst, 3.0));
  }

  {
    Vector c(2);
    c << 3.0, 4.0;
    const double r = 1.0;
    const SampleBatch batch = sample_ball_uniform(c, r, 1000000, seed + 31);
    double worst = 0.0;
    for (Index j = 0; j < 2; ++j) {
      const Vector logs = batch.draws.col(j).array().square().log();
      const double exact =
          ball_log_second_moment(c[j], r, 2, LogMomentMethod::exact);
      worst = std::max(worst, mean_z(logs, exact));
    }
    out.push_back(check("mc/ball-log-moment", worst, 3.0));
  }

  {
    // Monte-Carlo estimate of the ball/Gaussian divergence at K = 2:
    // average of log u(X) - log q(X) under X uniform on the unit disk,
    // with q the moment-matched normal N(0, (1/4) I).
    const int kk = 2;
    const double r = 1.0;
    const std::size_t n = 10000000;
    const SampleBatch batch = sample_ball_uniform(Vector::Zero(kk), r, n, seed + 37);
    const double log_u = -std::log(kPi * r * r);
    const double s2 = r * r / (kk + 2.0);
    Vector ratio(batch.draws.rows());
    for (Index i = 0; i < batch.draws.rows(); ++i) {
      const double q2 = batch.draws.row(i).squaredNorm();
      ratio[i] = log_u + std::log(2.0 * kPi * s2) + q2 / (2.0 * s2);
    }
    out.push_back(check("mc/ball-kl-k2",
                        mean_z(ratio, uniform_ball_divergence(kk)), 3.0));
  }

  {
    // The reference estimator's empirical MSE under the two least
    // favorable distributions must match the bound values.
    const GaussianReference ref = scalar_snr_reference(1.0, 0.0);
    const double eps = 0.1;
    const BoundsResult res = mmse_bounds(ref, eps);
    const LinearEstimator est = lmmse_estimator(ref);
    const Spectrum spec = spectrum(schur_complement(ref));
    double worst = 0.0;
    int branch_tag = 0;
    for (const double gamma : {res.gamma_plus, res.gamma_minus}) {
      const Matrix cov = least_favorable_cov(ref, gamma);
      const SampleBatch batch =
          sample_gaussian(ref.mean(), cov, 1000000, seed + 41 + branch_tag++);
      const McEstimate mse = empirical_mse(est, batch, ref.k(), ref.m());
      const double target = bound_value(spec, gamma);
      worst = std::max(worst, std::abs(mse.value - target) / mse.std_error);
    }
    out.push_back(check("mc/sandwich-gaussian", worst, 3.0));
  }

  {
    // Standard errors must shrink like 1/sqrt(n).
    const GaussianReference ref = scalar_snr_reference(1.0, 3.0);
    const LinearEstimator est = lmmse_estimator(ref);
    const SampleBatch small =
        sample_gaussian(ref.mean(), ref.cov(), 100000, seed + 43);
    const SampleBatch large =
        sample_gaussian(ref.mean(), ref.cov(), 400000, seed + 47);
    const double se_small = empirical_mse(est, small, 1, 1).std_error;
    const double se_large = empirical_mse(est, large, 1, 1).std_error;
    out.push_back(
        check("mc/stderr-scaling", std::abs(se_small / se_large - 2.0), 0.4));
  }
}

void run_oracle(std::vector<CheckResult>& out) {
  {
    // Bivariate normal, unit variances, correlation 0.6: MMSE = 1 - rho^2.
    const double rho = 0.6;
    const double det = 1.0 - rho * rho;
    const auto joint = [=](double x, double y) {
      const double quad = (x * x - 2.0 * rho * x * y + y * y) / det;
      return std::exp(-0.5 * quad) / (2.0 * kPi * std::sqrt(det));
    };
    const double mmse = numeric_mmse_1d(joint, {-8.0, 8.0, -8.0, 8.0});
    out.push_back(check("oracle/gaussian-mmse-grid", std::abs(mmse - det), 1e-5));
  }

  const auto additive_gg_joint = [](double ax, double p, double an, double q) {
    return [=](double x, double y) {
      return std::exp(gg_logpdf(x, ax, p) + gg_logpdf(y - x, an, q));
    };
  };

  {
    // p = q = 2 with unit variances is the Gaussian channel: MMSE = 1/2.
    const double a = std::sqrt(2.0);
    const double mmse =
        numeric_mmse_1d(additive_gg_joint(a, 2.0, a, 2.0),
                        {-8.0, 8.0, -11.0, 11.0});
    out.push_back(check("oracle/gg-mmse-p2-q2", std::abs(mmse - 0.5), 1e-4));
  }

  {
    // Laplace input, Gaussian noise, unit variances: the true MMSE must sit
    // between the closed-form lower bound and the linear-estimator value 1/2.
    const GGChannelSpec spec(1.0 / std::sqrt(2.0), 1.0, std::sqrt(2.0), 2.0);
    const double mmse =
        numeric_mmse_1d(additive_gg_joint(spec.a, spec.p, spec.b, spec.q),
                        {-12.0, 12.0, -14.0, 14.0});
    const double lower = gg_lower_bound(spec);
    const double outside =
        std::max({lower - mmse, mmse - 0.5, 0.0});
    out.push_back(check("oracle/gg-mmse-p1-q2-sandwich", outside, 1e-6));
  }

  {
    const double a = 0.5;
    const double closed =
        ((1.0 + a) * std::log1p(a) - (1.0 - a) * std::log1p(-a) - 2.0 * a) / a;
    out.push_back(
        check("oracle/h-closed-form", std::abs(h_integral(a, 1.0) - closed),
              1e-9));
  }
  {
    double worst = -1e300;
    for (const double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      for (const double b : {0.75, 1.0, 1.5, 3.0, 8.5}) {
        worst = std::max(worst, h_integral(a, b));
      }
    }
    CheckResult r{"oracle/h-negative", worst, 0.0, worst < 0.0};
    out.push_back(r);
  }

  {
    // Equal eigenvalues: the root-finding pipeline must reproduce the
    // closed-form flat-spectrum bounds.
    const double xi0 = 0.7;
    const int kk = 4;
    const double eps = 0.5;
    const Spectrum flat(Vector::Constant(kk, xi0));
    const auto [lo, hi] = flat_spectrum_bounds(xi0, kk, eps);
    const double lo2 = bound_value(flat, solve_gamma(flat, eps, Branch::plus));
    const double hi2 = bound_value(flat, solve_gamma(flat, eps, Branch::minus));
    const double worst = std::max(std::abs(lo - lo2) / lo, std::abs(hi - hi2) / hi);
    out.push_back(check("oracle/flat-spectrum-consistency", worst, 1e-9));
  }

  {
    // The extremal covariances attain both the KL budget and the bounds.
    const GaussianReference ref = additive_reference(
        exp_correlation_covariance(4, 0.9), 0.5 * Matrix::Identity(4, 4));
    const double eps = 0.3;
    const BoundsResult res = mmse_bounds(ref, eps);
    const LinearEstimator est = lmmse_estimator(ref);
    Matrix m(ref.k(), ref.k() + ref.m());
    m.leftCols(ref.k()) = Matrix::Identity(ref.k(), ref.k());
    m.rightCols(ref.m()) = -est.gain();
    double worst = 0.0;
    for (const auto& [gamma, target] :
         {std::pair{res.gamma_plus, res.lower},
          std::pair{res.gamma_minus, res.upper}}) {
      const Matrix cov = least_favorable_cov(ref, gamma);
      worst = std::max(
          worst, std::abs(gaussian_kl(ref.mean(), cov, ref.mean(), ref.cov()) -
                          eps));
      worst = std::max(worst,
                       std::abs((m * cov * m.transpose()).trace() - target));
    }
    out.push_back(check("oracle/attainment-identity", worst, 1e-8));
  }
}

}  // namespace

std::vector<CheckResult> run_suite(const std::string& suite,
                                   std::uint64_t seed) {
  std::vector<CheckResult> out;
  if (suite == "kl") {
    run_kl(out);
  } else if (suite == "mc") {
    run_mc(out, seed);
  } else if (suite == "oracle") {
    run_oracle(out);
  } else if (suite == "all") {
    run_kl(out);
    run_mc(out, seed);
    run_oracle(out);
  } else {
    throw DomainError("unknown validation suite: " + suite);
  }
  return out;
}

}  // namespace mmse_kl
