#include "mmse_kl/validation.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mmse_kl/quadrature.hpp"

namespace mmse_kl {

namespace {

// Square root factor of a PSD covariance: Cholesky if PD, otherwise
// eigenvalue square root with a roundoff clamp.
Matrix psd_sqrt_factor(const Matrix& cov) {
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
  if (es.info() != Eigen::Success) throw EigenFailure("eigensolver did not converge");
  Vector vals = es.eigenvalues();
  const double tol = 1e-10 * std::max(1.0, vals.cwiseAbs().maxCoeff());
  for (Index i = 0; i < vals.size(); ++i) {
    if (vals[i] < -tol) {
      throw NotPositiveSemidefinite("covariance is not positive semidefinite");
    }
    vals[i] = std::sqrt(std::max(vals[i], 0.0));
  }
  return es.eigenvectors() * vals.asDiagonal();
}

}  // namespace

SampleBatch sample_gaussian(const Vector& mean, const Matrix& cov,
                            std::size_t n, std::uint64_t seed) {
  const Index d = mean.size();
  if (cov.rows() != d || cov.cols() != d) {
    throw DimensionMismatch("mean and cov dimensions disagree");
  }
  if (n < 1) throw DomainError("n must be >= 1");
  const Matrix factor = psd_sqrt_factor(((cov + cov.transpose()) * 0.5).eval());

  Matrix z(static_cast<Index>(n), d);
  for (Index j = 0; j < d; ++j) {
    Rng rng(seed, static_cast<std::uint64_t>(j));
    for (Index i = 0; i < z.rows(); ++i) z(i, j) = rng.normal();
  }
  SampleBatch batch;
  batch.draws = (z * factor.transpose()).rowwise() + mean.transpose();
  batch.seed = seed;
  batch.distribution_tag = "gaussian";
  return batch;
}

SampleBatch sample_gg(double a, double p, std::size_t n, std::uint64_t seed) {
  if (!(a > 0.0) || !(p > 0.0)) throw DomainError("sample_gg requires a, p > 0");
  if (n < 1) throw DomainError("n must be >= 1");
  Rng magnitude_rng(seed, 0);
  Rng sign_rng(seed, 1);
  SampleBatch batch;
  batch.draws.resize(static_cast<Index>(n), 1);
  for (Index i = 0; i < batch.draws.rows(); ++i) {
    const double g = magnitude_rng.gamma(1.0 / p);
    const double sign = sign_rng.uniform() < 0.5 ? -1.0 : 1.0;
    batch.draws(i, 0) = sign * a * std::pow(g, 1.0 / p);
  }
  batch.seed = seed;
  batch.distribution_tag = "generalized_gaussian";
  return batch;
}

SampleBatch sample_ball_uniform(const Vector& c, double r, std::size_t n,
                                std::uint64_t seed) {
  const Index k = c.size();
  if (k < 1) throw DomainError("sample_ball_uniform requires K >= 1");
  if (!(r > 0.0)) throw DomainError("sample_ball_uniform requires r > 0");
  if (n < 1) throw DomainError("n must be >= 1");

  Matrix z(static_cast<Index>(n), k);
  for (Index j = 0; j < k; ++j) {
    Rng rng(seed, static_cast<std::uint64_t>(j));
    for (Index i = 0; i < z.rows(); ++i) z(i, j) = rng.normal();
  }
  Rng radius_rng(seed, static_cast<std::uint64_t>(k));
  SampleBatch batch;
  batch.draws.resize(static_cast<Index>(n), k);
  for (Index i = 0; i < batch.draws.rows(); ++i) {
    const double norm = z.row(i).norm();
    const double radius =
        r * std::pow(radius_rng.uniform(), 1.0 / static_cast<double>(k));
    batch.draws.row(i) = c.transpose() + (radius / norm) * z.row(i);
  }
  batch.seed = seed;
  batch.distribution_tag = "ball_uniform";
  return batch;
}

McEstimate empirical_mse(const LinearEstimator& est, const SampleBatch& batch,
                         Index k, Index m) {
  if (batch.draws.cols() != k + m) {
    throw DimensionMismatch("batch columns must partition as (x, y)");
  }
  const Index n = batch.draws.rows();
  Vector errors(n);
  for (Index i = 0; i < n; ++i) {
    const Vector x = batch.draws.row(i).head(k).transpose();
    const Vector y = batch.draws.row(i).tail(m).transpose();
    errors[i] = (x - est.apply(y)).squaredNorm();
  }
  McEstimate out;
  out.n = static_cast<std::size_t>(n);
  out.value = errors.mean();
  if (n > 1) {
    const double var = (errors.array() - out.value).square().sum() /
                       static_cast<double>(n - 1);
    out.std_error = std::sqrt(var / static_cast<double>(n));
  }
  return out;
}

double numeric_kl_1d(const std::function<double(double)>& logp,
                     const std::function<double(double)>& logq, double lo,
                     double hi) {
  const auto p_density = [&](double x) {
    const double lp = logp(x);
    return lp > -700.0 ? std::exp(lp) : 0.0;
  };
  const double mass_p = integrate(p_density, lo, hi, 1e-9);
  if (std::abs(mass_p - 1.0) > 1e-6) {
    throw NotNormalized("p does not integrate to 1 on the support");
  }
  const auto integrand = [&](double x) {
    const double lp = logp(x);
    if (lp <= -700.0) return 0.0;
    return std::exp(lp) * (lp - logq(x));
  };
  return integrate(integrand, lo, hi, 1e-8);
}

namespace {

// Trapezoid row moments (m0, m1, m2) over x at a fixed y, with stride to
// reuse the fine grid nodes for the half-resolution estimate.
struct RowMoments {
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
};

// n is odd, so stride 2 still lands on the last node.
RowMoments row_moments(const Vector& fx, const Vector& xs, Index stride) {
  RowMoments r;
  const Index n = fx.size();
  for (Index i = 0; i < n; i += stride) {
    const double weight = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    r.m0 += weight * fx[i];
    r.m1 += weight * fx[i] * xs[i];
    r.m2 += weight * fx[i] * xs[i] * xs[i];
  }
  return r;
}

// integral of Var(X|y) p(y) dy over integral of p(y) dy; the grid cell
// area cancels in the ratio.
double assemble(const std::vector<RowMoments>& rows) {
  double numerator = 0.0, mass = 0.0;
  const Index n = static_cast<Index>(rows.size());
  for (Index j = 0; j < n; ++j) {
    const double wy = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    const RowMoments& r = rows[j];
    if (r.m0 <= 1e-300) continue;
    numerator += wy * (r.m2 - r.m1 * r.m1 / r.m0);
    mass += wy * r.m0;
  }
  return mass > 0.0 ? numerator / mass : 0.0;
}

double grid_mass(const std::vector<RowMoments>& rows, double dx, double dy) {
  double mass = 0.0;
  const Index n = static_cast<Index>(rows.size());
  for (Index j = 0; j < n; ++j) {
    const double wy = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    mass += wy * rows[j].m0;
  }
  return mass * dx * dy;
}

}  // namespace

double numeric_mmse_1d(const std::function<double(double, double)>& joint_density,
                       const GridSpec& grid) {
  if (!(grid.x_hi > grid.x_lo) || !(grid.y_hi > grid.y_lo)) {
    throw DomainError("grid bounds are degenerate");
  }
  int n = grid.n | 1;  // odd so the stride-2 grid shares nodes
  for (int attempt = 0; attempt <= grid.max_refinements; ++attempt, n = 2 * n - 1) {
    const double dx = (grid.x_hi - grid.x_lo) / (n - 1);
    const double dy = (grid.y_hi - grid.y_lo) / (n - 1);
    Vector xs(n);
    for (int i = 0; i < n; ++i) xs[i] = grid.x_lo + i * dx;

    std::vector<RowMoments> fine(n);
    std::vector<RowMoments> coarse((n + 1) / 2);
    Vector fx(n);
    for (int j = 0; j < n; ++j) {
      const double y = grid.y_lo + j * dy;
      for (int i = 0; i < n; ++i) fx[i] = joint_density(xs[i], y);
      fine[j] = row_moments(fx, xs, 1);
      if (j % 2 == 0) coarse[j / 2] = row_moments(fx, xs, 2);
    }

    const double mass = grid_mass(fine, dx, dy);
    if (std::abs(mass - 1.0) > 1e-3) {
      throw GridTooCoarse("grid does not cover the density mass");
    }

    const double full = assemble(fine);
    const double half = assemble(coarse);
    if (std::abs(full - half) <= 1e-4 * std::max(std::abs(full), 1e-300)) {
      return full;
    }
  }
  throw GridTooCoarse("Richardson criterion not met after max refinements");
}

}  // namespace mmse_kl
