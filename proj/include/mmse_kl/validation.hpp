#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "mmse_kl/gaussian_model.hpp"
#include "mmse_kl/rng.hpp"

namespace mmse_kl {

/// Seeded, reproducible batch of n draws from a d-dimensional distribution.
struct SampleBatch {
  Matrix draws;  // n x d, one draw per row
  std::uint64_t seed = 0;
  std::string distribution_tag;
};

/// Monte-Carlo point estimate with its standard error.
struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Draws from N(mean, cov). Cholesky transform when cov is PD, eigenvalue
/// square root when it is merely PSD. Column j of the latent normals comes
/// from stream j of the seed.
SampleBatch sample_gaussian(const Vector& mean, const Matrix& cov,
                            std::size_t n, std::uint64_t seed);

/// Draws from GG(a, p) as sign * a * G^{1/p} with G ~ Gamma(1/p, 1).
SampleBatch sample_gg(double a, double p, std::size_t n, std::uint64_t seed);

/// Uniform draws on the ball of radius r around c: scaled Gaussian
/// direction times radius r * U^{1/K}.
SampleBatch sample_ball_uniform(const Vector& c, double r, std::size_t n,
                                std::uint64_t seed);

/// Mean and standard error of ||x - f(y)||^2 over a batch whose columns
/// partition as (x, y).
McEstimate empirical_mse(const LinearEstimator& est, const SampleBatch& batch,
                         Index k, Index m);

/// Numeric KL divergence between two normalized 1-D densities given as
/// log-density callables, by adaptive quadrature on [lo, hi].
double numeric_kl_1d(const std::function<double(double)>& logp,
                     const std::function<double(double)>& logq, double lo,
                     double hi);

/// Tensor grid for numeric_mmse_1d. n is the number of nodes per axis
/// (forced odd so half resolution reuses the same nodes).
struct GridSpec {
  double x_lo, x_hi;
  double y_lo, y_hi;
  int n = 2001;
  int max_refinements = 3;
};

/// Ground-truth scalar MMSE by grid integration of Var(X | y) p(y) dy.
/// The half-resolution estimate must agree to 1e-4 relative, otherwise the
/// grid is doubled up to max_refinements times before GridTooCoarse.
double numeric_mmse_1d(const std::function<double(double, double)>& joint_density,
                       const GridSpec& grid);

}  // namespace mmse_kl
