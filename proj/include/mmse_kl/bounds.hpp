#pragma once

#include <utility>

#include "mmse_kl/gaussian_model.hpp"

namespace mmse_kl {

enum class Branch { plus, minus };

/// Result of evaluating the two-sided MMSE bounds at KL radius epsilon.
struct BoundsResult {
  double epsilon = 0.0;
  double gamma_plus = 0.0;
  double gamma_minus = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double reference_mmse = 0.0;
};

/// phi(t) = log(1+t) - t/(1+t) for t > -1. Nonnegative, strictly
/// decreasing on (-1, 0] and strictly increasing on [0, inf).
double phi(double t);

/// Lambert W on the real branches 0 and -1. Halley iteration with a
/// branch-point series fallback near x = -1/e; the defining-equation
/// residual |w e^w - x| stays below 1e-13 * max(1, |x|).
double lambert_w(int branch, double x);

/// omega_i(t) = -W_i(-e^{-(2t+1)}) for t >= 0. Branch 0 maps into (0, 1]
/// and decreases; branch -1 maps into [1, inf) and increases; both equal 1
/// at t = 0. When e^{-(2t+1)} underflows the defining equation
/// w - log w = 2t + 1 is solved directly by Newton.
double omega(int branch, double t);

/// Finite interval guaranteed to contain the gamma root of the given
/// branch, derived from the flat-spectrum closed form.
std::pair<double, double> gamma_brackets(const Spectrum& spec, double eps,
                                         Branch branch);

/// Root of sum_k phi(gamma * xi_k) = 2 * eps on the requested branch.
/// Residual <= 1e-12 * max(1, 2 eps). eps = 0 returns 0 exactly.
double solve_gamma(const Spectrum& spec, double eps, Branch branch);

/// sum_k xi_k / (1 + gamma xi_k), the bound attained at scale gamma.
double bound_value(const Spectrum& spec, double gamma);

/// Full pipeline: spectrum of the reference, both gamma roots, both bounds.
/// An all-zero spectrum degenerates to lower = upper = 0 (trivially tight).
BoundsResult mmse_bounds(const GaussianReference& ref, double eps);

/// Closed-form bounds (K xi0 omega_0(eps/K), K xi0 omega_{-1}(eps/K)) for a
/// flat spectrum xi_1 = ... = xi_K = xi0.
std::pair<double, double> flat_spectrum_bounds(double xi0, int k, double eps);

}  // namespace mmse_kl
