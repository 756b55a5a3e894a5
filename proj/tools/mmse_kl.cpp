// mmse-kl: bounds on the minimum mean squared error when the joint
// input-output distribution lies in a KL ball around a Gaussian reference.
//
// Subcommands:
//   bounds    two-sided MMSE bounds for a reference JSON and a KL radius
//   lfd       least favorable (bound-attaining) covariance for one branch
//   fig       bundled figure-data presets, written as CSV
//   validate  built-in numeric/Monte-Carlo validation suites

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mmse_kl/bounds.hpp"
#include "mmse_kl/channel_models.hpp"
#include "mmse_kl/divergences.hpp"
#include "mmse_kl/errors.hpp"
#include "mmse_kl/gaussian_model.hpp"
#include "mmse_kl/parallel.hpp"
#include "mmse_kl/reference_io.hpp"
#include "mmse_kl/suites.hpp"

namespace {

using mmse_kl::Branch;
using mmse_kl::Matrix;
using mmse_kl::Vector;

std::string fmt12(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Writes the full payload at once so a failed computation never leaves a
// partial file behind.
void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw mmse_kl::DomainError("cannot open output file: " + out_path);
  file << payload;
  if (!file.good()) throw mmse_kl::DomainError("failed writing: " + out_path);
}

std::string csv(const std::vector<std::string>& header,
                const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    out += header[i];
    out += (i + 1 == header.size()) ? '\n' : ',';
  }
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += fmt12(row[i]);
      out += (i + 1 == row.size()) ? '\n' : ',';
    }
  }
  return out;
}

int cmd_bounds(const std::string& ref_path, double eps,
               const std::string& out_path) {
  const mmse_kl::GaussianReference ref = mmse_kl::read_reference_json(ref_path);
  const mmse_kl::BoundsResult res = mmse_kl::mmse_bounds(ref, eps);
  const mmse_kl::Spectrum spec =
      mmse_kl::spectrum(mmse_kl::schur_complement(ref));

  nlohmann::ordered_json doc;
  doc["epsilon"] = res.epsilon;
  doc["gamma_plus"] = res.gamma_plus;
  doc["gamma_minus"] = res.gamma_minus;
  doc["lower"] = res.lower;
  doc["upper"] = res.upper;
  doc["reference_mmse"] = res.reference_mmse;
  doc["spectrum"] = std::vector<double>(
      spec.eigenvalues().data(), spec.eigenvalues().data() + spec.size());
  for (const auto& [key, gamma] :
       {std::pair<const char*, double>{"kl_residual_plus", res.gamma_plus},
        {"kl_residual_minus", res.gamma_minus}}) {
    if (res.reference_mmse == 0.0) {
      doc[key] = 0.0;
      continue;
    }
    const Matrix cov = mmse_kl::least_favorable_cov(ref, gamma);
    doc[key] = std::abs(
        mmse_kl::gaussian_kl(ref.mean(), cov, ref.mean(), ref.cov()) - eps);
  }
  emit(doc.dump(2) + "\n", out_path);
  return 0;
}

int cmd_lfd(const std::string& ref_path, double eps, const std::string& branch,
            const std::string& out_path) {
  const mmse_kl::GaussianReference ref = mmse_kl::read_reference_json(ref_path);
  const mmse_kl::Spectrum spec =
      mmse_kl::spectrum(mmse_kl::schur_complement(ref));
  const Branch b = branch == "plus" ? Branch::plus : Branch::minus;
  const double gamma = mmse_kl::solve_gamma(spec, eps, b);
  const Matrix cov = mmse_kl::least_favorable_cov(ref, gamma);
  emit(mmse_kl::covariance_to_json(cov, gamma, eps, branch) + "\n", out_path);
  return 0;
}

std::string fig1() {
  std::vector<std::vector<double>> rows(101);
  mmse_kl::parallel_for(rows.size(), [&](std::size_t i) {
    const double t = 0.05 * static_cast<double>(i);
    rows[i] = {t, mmse_kl::omega(0, t), mmse_kl::omega(-1, t)};
  });
  return csv({"t", "omega0", "omega_minus1"}, rows);
}

std::string fig2() {
  const mmse_kl::GaussianReference ref = mmse_kl::additive_reference(
      mmse_kl::exp_correlation_covariance(10, 0.9), Matrix::Identity(10, 10));
  std::vector<std::vector<double>> rows(50);
  mmse_kl::parallel_for(rows.size(), [&](std::size_t i) {
    const double eps = 0.1 * static_cast<double>(i + 1);
    const mmse_kl::BoundsResult res = mmse_kl::mmse_bounds(ref, eps);
    // The "input uncertainty only" comparison curve needs bound formulas
    // from a different framework and is intentionally not computed.
    rows[i] = {eps, res.lower, res.upper,
               std::numeric_limits<double>::quiet_NaN()};
  });
  return csv({"eps", "lower", "upper", "input_only"}, rows);
}

// Unit-variance scale of the p-generalized Gaussian.
double gg_unit_scale(double p) {
  return std::sqrt(std::exp(std::lgamma(1.0 / p) - std::lgamma(3.0 / p)));
}

std::string fig_gg_surface() {
  constexpr int n = 29;
  std::vector<std::vector<double>> rows(n * n);
  mmse_kl::parallel_for(rows.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / n;
    const int j = static_cast<int>(idx) % n;
    const double log2p = -2.0 + 7.0 * i / (n - 1);
    const double log2q = -2.0 + 7.0 * j / (n - 1);
    const double p = std::exp2(log2p);
    const double q = std::exp2(log2q);
    const mmse_kl::GGChannelSpec spec(gg_unit_scale(p), p, gg_unit_scale(q), q);
    const double lower = mmse_kl::gg_lower_bound(spec);
    const double crb = mmse_kl::gg_crb(spec);
    rows[idx] = {log2p, log2q, lower, crb, lower - crb};
  });
  return csv({"log2p", "log2q", "lower", "crb", "diff"}, rows);
}

std::string fig7() {
  std::vector<std::vector<double>> rows(100);
  mmse_kl::parallel_for(rows.size(), [&](std::size_t i) {
    const int kk = static_cast<int>(i) + 1;
    const mmse_kl::BallChannelSpec spec(Vector::Constant(kk, 10.0), 2.0);
    const auto [lo, hi] =
        mmse_kl::mult_channel_bounds(spec, mmse_kl::LogMomentMethod::exact);
    const auto approx = mmse_kl::mult_channel_bounds(
        spec, mmse_kl::LogMomentMethod::affine_bound);
    rows[i] = {static_cast<double>(kk), lo, hi, approx.first};
  });
  return csv({"k", "lower", "upper", "approx_lower"}, rows);
}

std::string fig8() {
  constexpr int n = 64;
  std::vector<std::vector<double>> rows(n * n);
  mmse_kl::parallel_for(rows.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / n;
    const int j = static_cast<int>(idx) % n;
    const double c1 = 1.5 + (10.0 - 1.5) * i / (n - 1);
    const double c2 = 1.5 + (10.0 - 1.5) * j / (n - 1);
    Vector c(2);
    c << c1, c2;
    const mmse_kl::BallChannelSpec spec(c, 1.0);
    const auto [lo, hi] =
        mmse_kl::mult_channel_bounds(spec, mmse_kl::LogMomentMethod::exact);
    (void)hi;
    rows[idx] = {c1, c2, lo};
  });
  return csv({"c1", "c2", "lower"}, rows);
}

int cmd_fig(int id, const std::string& out_path) {
  std::string payload;
  switch (id) {
    case 1: payload = fig1(); break;
    case 2: payload = fig2(); break;
    case 5:
    case 6: payload = fig_gg_surface(); break;
    case 7: payload = fig7(); break;
    case 8: payload = fig8(); break;
    default:
      std::cerr << "unsupported figure id: " << id << "\n";
      return 2;
  }
  emit(payload, out_path);
  return 0;
}

int cmd_validate(const std::string& suite, std::uint64_t seed) {
  const std::vector<mmse_kl::CheckResult> results =
      mmse_kl::run_suite(suite, seed);
  bool all_pass = true;
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::printf("%s %-34s measured=%-18s threshold=%s\n",
                r.pass ? "PASS" : "FAIL", r.name.c_str(),
                fmt12(r.measured).c_str(), fmt12(r.threshold).c_str());
  }
  std::printf("%zu/%zu checks passed\n",
              static_cast<std::size_t>(
                  std::count_if(results.begin(), results.end(),
                                [](const auto& r) { return r.pass; })),
              results.size());
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MMSE bounds over KL divergence balls around a Gaussian reference"};
  app.require_subcommand(1);

  std::string ref_path, out_path, branch = "minus", suite = "all";
  double eps = 0.0;
  int fig_id = 0;
  std::uint64_t seed = 42;

  CLI::App* bounds = app.add_subcommand("bounds", "Two-sided MMSE bounds");
  bounds->add_option("--ref", ref_path, "Reference JSON file")->required();
  bounds->add_option("--eps", eps, "KL radius (nats)")->required();
  bounds->add_option("--out", out_path, "Output JSON path (default stdout)");

  CLI::App* lfd = app.add_subcommand("lfd", "Least favorable covariance");
  lfd->add_option("--ref", ref_path, "Reference JSON file")->required();
  lfd->add_option("--eps", eps, "KL radius (nats)")->required();
  lfd->add_option("--branch", branch, "Bound branch")
      ->check(CLI::IsMember({"plus", "minus"}));
  lfd->add_option("--out", out_path, "Output JSON path (default stdout)");

  CLI::App* fig = app.add_subcommand("fig", "Figure-data presets (CSV)");
  fig->add_option("--id", fig_id, "Figure id: 1, 2, 5, 6, 7 or 8")->required();
  fig->add_option("--out", out_path, "Output CSV path")->required();

  CLI::App* validate = app.add_subcommand("validate", "Validation suites");
  validate->add_option("--suite", suite, "kl, mc, oracle or all")
      ->check(CLI::IsMember({"kl", "mc", "oracle", "all"}));
  validate->add_option("--seed", seed, "Monte-Carlo seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (bounds->parsed() || lfd->parsed()) {
      if (eps < 0.0) {
        std::cerr << "epsilon must be nonnegative\n";
        return 2;
      }
    }
    if (bounds->parsed()) return cmd_bounds(ref_path, eps, out_path);
    if (lfd->parsed()) return cmd_lfd(ref_path, eps, branch, out_path);
    if (fig->parsed()) return cmd_fig(fig_id, out_path);
    return cmd_validate(suite, seed);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
