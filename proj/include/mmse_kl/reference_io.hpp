#pragma once

#include <string>

#include "mmse_kl/gaussian_model.hpp"

namespace mmse_kl {

/// Parses {"mean": [...], "cov": [[...]], "k": int, "m": int} (row-major,
/// finite doubles) and validates it as a GaussianReference.
GaussianReference read_reference_json(const std::string& path);

/// Serializes a reference back to the same schema.
std::string reference_to_json(const GaussianReference& ref);

/// Serializes a bare covariance matrix as {"cov": [[...]]} plus extras.
std::string covariance_to_json(const Matrix& cov, double gamma, double epsilon,
                               const std::string& branch);

}  // namespace mmse_kl
