#include "mmse_kl/reference_io.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace mmse_kl {

namespace {

using nlohmann::json;

double finite_number(const json& j, const char* what) {
  if (!j.is_number()) throw DomainError(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
  return v;
}

}  // namespace

GaussianReference read_reference_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open reference file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw DomainError("reference file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.contains("mean") || !j.contains("cov") || !j.contains("k") || !j.contains("m")) {
    throw DomainError("reference JSON requires mean, cov, k, m");
  }
  const auto k = j["k"].get<Index>();
  const auto m = j["m"].get<Index>();
  const auto& jm = j["mean"];
  const auto& jc = j["cov"];
  if (!jm.is_array() || !jc.is_array()) {
    throw DomainError("mean must be an array and cov an array of rows");
  }
  Vector mean(static_cast<Index>(jm.size()));
  for (Index i = 0; i < mean.size(); ++i) {
    mean[i] = finite_number(jm[static_cast<std::size_t>(i)], "mean entry");
  }
  const Index d = static_cast<Index>(jc.size());
  Matrix cov(d, d);
  for (Index r = 0; r < d; ++r) {
    const auto& row = jc[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != d) {
      throw DimensionMismatch("cov must be square (row-major array of rows)");
    }
    for (Index c = 0; c < d; ++c) {
      cov(r, c) = finite_number(row[static_cast<std::size_t>(c)], "cov entry");
    }
  }
  return GaussianReference(std::move(mean), std::move(cov), k, m);
}

std::string reference_to_json(const GaussianReference& ref) {
  json j;
  j["k"] = ref.k();
  j["m"] = ref.m();
  j["mean"] = std::vector<double>(ref.mean().data(), ref.mean().data() + ref.mean().size());
  json rows = json::array();
  for (Index r = 0; r < ref.cov().rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < ref.cov().cols(); ++c) row.push_back(ref.cov()(r, c));
    rows.push_back(std::move(row));
  }
  j["cov"] = std::move(rows);
  return j.dump(2);
}

std::string covariance_to_json(const Matrix& cov, double gamma, double epsilon,
                               const std::string& branch) {
  json j;
  j["epsilon"] = epsilon;
  j["gamma"] = gamma;
  j["branch"] = branch;
  json rows = json::array();
  for (Index r = 0; r < cov.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < cov.cols(); ++c) row.push_back(cov(r, c));
    rows.push_back(std::move(row));
  }
  j["cov"] = std::move(rows);
  return j.dump(2);
}

}  // namespace mmse_kl
