#pragma once

#include <stdexcept>
#include <string>

namespace mmse_kl {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct AsymmetricInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotPositiveDefinite : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Covariance factorizations that only need semidefiniteness.
struct NotPositiveSemidefinite : NotPositiveDefinite {
  using NotPositiveDefinite::NotPositiveDefinite;
};

struct GammaOutOfRange : std::domain_error {
  using std::domain_error::domain_error;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// The gamma root equation has no solution when the whole spectrum is zero.
struct AllZeroSpectrum : std::domain_error {
  using std::domain_error::domain_error;
};

struct EigenFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridTooCoarse : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotNormalized : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mmse_kl
