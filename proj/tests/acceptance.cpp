// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. argv[1] is the path to the mmse-kl binary (used by the
// determinism criterion).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "mmse_kl/bounds.hpp"
#include "mmse_kl/channel_models.hpp"
#include "mmse_kl/divergences.hpp"
#include "mmse_kl/gaussian_model.hpp"
#include "mmse_kl/rng.hpp"
#include "mmse_kl/validation.hpp"
#include "test_helpers.hpp"

using namespace mmse_kl;

namespace {

int failures = 0;

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

void report(int id, bool pass, const std::string& detail) {
  std::printf("%s criterion-%02d %s\n", pass ? "PASS" : "FAIL", id,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double gg_unit_scale(double p) {
  return std::sqrt(std::exp(std::lgamma(1.0 / p) - std::lgamma(3.0 / p)));
}

double gg_logpdf(double x, double a, double p) {
  return std::log(p) - std::log(2.0 * a) - std::lgamma(1.0 / p) -
         std::pow(std::abs(x) / a, p);
}

constexpr double kPi = 3.141592653589793238462643383279503;

void criterion1() {
  Timer timer;
  double worst_kl = 0.0, worst_rel = 0.0;
  Rng pick(101);
  for (int trial = 0; trial < 100; ++trial) {
    const Index k = 1 + static_cast<Index>(pick.uniform() * 8);
    const Index m = 1 + static_cast<Index>(pick.uniform() * 8);
    const GaussianReference ref =
        test::make_random_reference(9000 + trial, std::min<Index>(k, 8),
                                    std::min<Index>(m, 8));
    const double eps = 1e-3 + 5.0 * pick.uniform();
    const BoundsResult res = mmse_bounds(ref, eps);
    for (const auto& [gamma, target] :
         {std::pair{res.gamma_plus, res.lower},
          std::pair{res.gamma_minus, res.upper}}) {
      const Matrix cov = least_favorable_cov(ref, gamma);
      worst_kl = std::max(
          worst_kl,
          std::abs(gaussian_kl(ref.mean(), cov, ref.mean(), ref.cov()) - eps));
      const GaussianReference tilted(ref.mean(), cov, ref.k(), ref.m());
      worst_rel = std::max(worst_rel, std::abs(gaussian_mmse(tilted) - target) /
                                          std::abs(target));
    }
  }
  const double dt = timer.seconds();
  report(1, worst_kl <= 1e-9 && worst_rel <= 1e-9 && dt < 10.0,
         "attainment: kl residual " + fmt(worst_kl) + " (<=1e-9), mmse rel " +
             fmt(worst_rel) + " (<=1e-9), " + fmt(dt) + "s (<10)");
}

void criterion2() {
  Timer timer;
  Rng pick(202);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double xi0 = 0.02 + 4.0 * pick.uniform();
    const int k = 1 + static_cast<int>(pick.uniform() * 63);
    const double eps = 0.01 + 9.99 * pick.uniform();
    const auto [lo, hi] = flat_spectrum_bounds(xi0, k, eps);
    const Spectrum flat(Vector::Constant(k, xi0));
    const double lo2 = bound_value(flat, solve_gamma(flat, eps, Branch::plus));
    const double hi2 = bound_value(flat, solve_gamma(flat, eps, Branch::minus));
    worst = std::max({worst, std::abs(lo - lo2) / lo, std::abs(hi - hi2) / hi});
  }
  double worst_w = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double x0 =
        -std::exp(-1.0) + std::pow(10.0, -12.0 + 15.0 * i / 9999.0);
    const double w0 = lambert_w(0, x0);
    worst_w = std::max(worst_w, std::abs(w0 * std::exp(w0) - x0) /
                                    std::max(1.0, std::abs(x0)));
    const double x1 = -std::exp(-1.0 - 30.0 * i / 9999.0);
    const double w1 = lambert_w(-1, x1);
    worst_w = std::max(worst_w, std::abs(w1 * std::exp(w1) - x1) /
                                    std::max(1.0, std::abs(x1)));
  }
  const double dt = timer.seconds();
  report(2, worst <= 1e-9 && worst_w <= 1e-13 && dt < 5.0,
         "closed form vs root-find rel " + fmt(worst) +
             " (<=1e-9), Lambert residual " + fmt(worst_w) + " (<=1e-13), " +
             fmt(dt) + "s (<5)");
}

void criterion3() {
  Timer timer;
  Rng pick(303);
  bool contained = true;
  for (int trial = 0; trial < 200 && contained; ++trial) {
    const Index k = 1 + static_cast<Index>(pick.uniform() * 8);
    Vector xi(k);
    for (Index i = 0; i < k; ++i) xi[i] = std::exp(3.0 * pick.normal());
    std::sort(xi.data(), xi.data() + k, std::greater<double>());
    const Spectrum spec(xi);
    const double eps = 0.02 + 6.0 * pick.uniform();
    for (const Branch b : {Branch::plus, Branch::minus}) {
      const auto [lo, hi] = gamma_brackets(spec, eps, b);
      const double g = solve_gamma(spec, eps, b);
      contained = contained && g >= lo && g <= hi;
    }
  }
  const double dt = timer.seconds();
  report(3, contained && dt < 5.0,
         std::string("bracket containment on 200 skewed spectra: ") +
             (contained ? "all inside" : "violation found") + ", " + fmt(dt) +
             "s (<5)");
}

void criterion4() {
  Rng pick(404);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index k = 1 + static_cast<Index>(pick.uniform() * 4);
    const Index m = 1 + static_cast<Index>(pick.uniform() * 4);
    const GaussianReference ref = test::make_random_reference(7000 + trial, k, m);
    const double eps = 0.05 + 2.0 * pick.uniform();
    const BoundsResult res = mmse_bounds(ref, eps);
    const LinearEstimator base = lmmse_estimator(ref);
    for (const double gamma : {res.gamma_plus, res.gamma_minus}) {
      const GaussianReference tilted(ref.mean(),
                                     least_favorable_cov(ref, gamma), k, m);
      const LinearEstimator est = lmmse_estimator(tilted);
      worst = std::max(
          {worst, (est.gain() - base.gain()).cwiseAbs().maxCoeff(),
           (est.input_mean() - base.input_mean()).cwiseAbs().maxCoeff(),
           (est.output_mean() - base.output_mean()).cwiseAbs().maxCoeff()});
    }
  }
  report(4, worst <= 1e-10,
         "estimator invariance: max deviation " + fmt(worst) + " (<=1e-10)");
}

void criterion5() {
  Timer timer;
  double worst_gg = 0.0;
  for (const double p : {0.5, 1.0, 2.0, 4.0, 32.0}) {
    const double sigma2 = gg_best_sigma(1.0, p);
    const double lim =
        std::pow(36.0, 1.0 / p) + 12.0 * std::sqrt(sigma2);
    const double numeric = numeric_kl_1d(
        [=](double x) { return gg_logpdf(x, 1.0, p); },
        [=](double x) {
          return -0.5 * std::log(2.0 * kPi * sigma2) -
                 x * x / (2.0 * sigma2);
        },
        -lim, lim);
    worst_gg = std::max(worst_gg, std::abs(gg_divergence(p) - numeric));
  }
  const bool zero_at_2 = std::abs(gg_divergence(2.0)) <= 1e-12;

  const double du1 = numeric_kl_1d(
      [](double) { return -std::log(2.0); },
      [](double x) {
        const double s2 = 1.0 / 3.0;
        return -0.5 * std::log(2.0 * kPi * s2) - x * x / (2.0 * s2);
      },
      -1.0, 1.0);
  const double err_u1 = std::abs(du1 - uniform_ball_divergence(1));

  // K = 2: Monte-Carlo estimate of E[log u(X) - log q(X)], X uniform disk.
  const std::size_t n = 10000000;
  const SampleBatch batch = sample_ball_uniform(Vector::Zero(2), 1.0, n, 4242);
  const double s2 = 0.25;
  double sum = 0.0, sumsq = 0.0;
  for (Index i = 0; i < batch.draws.rows(); ++i) {
    const double v = -std::log(kPi) + std::log(2.0 * kPi * s2) +
                     batch.draws.row(i).squaredNorm() / (2.0 * s2);
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / double(n);
  const double se =
      std::sqrt((sumsq / double(n) - mean * mean) / double(n - 1));
  const double z = std::abs(mean - uniform_ball_divergence(2)) / se;

  const double dt = timer.seconds();
  report(5,
         worst_gg <= 1e-6 && zero_at_2 && err_u1 <= 1e-6 && z <= 3.0 &&
             dt < 60.0,
         "divergence oracles: gg err " + fmt(worst_gg) + " (<=1e-6), ball-1d err " +
             fmt(err_u1) + " (<=1e-6), ball-2d MC z " + fmt(z) + " (<=3), " +
             fmt(dt) + "s (<60)");
}

void criterion6() {
  const GGChannelSpec gauss(std::sqrt(2.0), 2.0, std::sqrt(2.0), 2.0);
  const bool coincide = std::abs(gg_lower_bound(gauss) - 0.5) <= 1e-12 &&
                        std::abs(gg_crb(gauss) - 0.5) <= 1e-12;

  constexpr int n = 29;
  std::vector<std::vector<double>> diff(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double p = std::exp2(-2.0 + 7.0 * i / (n - 1));
      const double q = std::exp2(-2.0 + 7.0 * j / (n - 1));
      const GGChannelSpec spec(gg_unit_scale(p), p, gg_unit_scale(q), q);
      diff[i][j] = gg_lower_bound(spec) - gg_crb(spec);
    }
  }
  // Negative region: one 4-connected component whose bounding box straddles
  // the Gaussian point log2(p) = log2(q) = 1.
  int count = 0, lo_i = n, hi_i = -1, lo_j = n, hi_j = -1;
  int si = -1, sj = -1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (diff[i][j] < 0.0) {
        ++count;
        lo_i = std::min(lo_i, i);
        hi_i = std::max(hi_i, i);
        lo_j = std::min(lo_j, j);
        hi_j = std::max(hi_j, j);
        si = i;
        sj = j;
      }
    }
  }
  int reached = 0;
  if (count > 0) {
    std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
    std::deque<std::pair<int, int>> queue{{si, sj}};
    seen[si][sj] = true;
    while (!queue.empty()) {
      const auto [i, j] = queue.front();
      queue.pop_front();
      ++reached;
      const int di[] = {1, -1, 0, 0}, dj[] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        const int ni = i + di[d], nj = j + dj[d];
        if (ni >= 0 && ni < n && nj >= 0 && nj < n && !seen[ni][nj] &&
            diff[ni][nj] < 0.0) {
          seen[ni][nj] = true;
          queue.emplace_back(ni, nj);
        }
      }
    }
  }
  const auto axis = [&](int idx) { return -2.0 + 7.0 * idx / (n - 1); };
  const bool connected = count > 0 && reached == count;
  const bool around_gauss = count > 0 && axis(lo_i) <= 1.0 &&
                            axis(hi_i) >= 1.0 && axis(lo_j) <= 1.0 &&
                            axis(hi_j) >= 1.0;
  report(6, coincide && connected && around_gauss,
         "gaussian coincidence 0.5/0.5, negative region " +
             std::to_string(count) + " cells, connected=" +
             (connected ? "yes" : "no") + ", bbox log2p [" + fmt(axis(lo_i)) +
             "," + fmt(axis(hi_i)) + "] log2q [" + fmt(axis(lo_j)) + "," +
             fmt(axis(hi_j)) + "]");
}

void criterion7() {
  Timer timer;
  bool sandwiched = true;
  double gauss_err = 1.0;
  for (const double p : {1.0, 2.0, 4.0}) {
    for (const double q : {1.0, 2.0, 4.0}) {
      const double ax = gg_unit_scale(p), an = gg_unit_scale(q);
      const auto joint = [=](double x, double y) {
        return std::exp(gg_logpdf(x, ax, p) + gg_logpdf(y - x, an, q));
      };
      const double lx = ax * std::pow(36.0, 1.0 / p) + 6.0;
      const double ly = lx + an * std::pow(36.0, 1.0 / q) + 6.0;
      const double mmse = numeric_mmse_1d(joint, {-lx, lx, -ly, ly});
      const double lower = gg_lower_bound(GGChannelSpec(ax, p, an, q));
      sandwiched = sandwiched && mmse >= lower - 1e-4 && mmse <= 1.0 + 1e-4;
      if (p == 2.0 && q == 2.0) gauss_err = std::abs(mmse - 0.5);
    }
  }
  const double dt = timer.seconds();
  report(7, sandwiched && gauss_err <= 1e-4 && dt < 120.0,
         std::string("scalar ground truth: sandwich ") +
             (sandwiched ? "holds" : "violated") + ", gaussian cell err " +
             fmt(gauss_err) + " (<=1e-4), " + fmt(dt) + "s (<120)");
}

void criterion8() {
  Timer timer;
  bool upper_exact = true, nondecreasing = true, approx_below = true;
  double prev = 0.0, ratio100 = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const BallChannelSpec spec(Vector::Constant(k, 10.0), 2.0);
    const auto [lo, hi] = mult_channel_bounds(spec, LogMomentMethod::exact);
    const auto approx = mult_channel_bounds(spec, LogMomentMethod::affine_bound);
    upper_exact = upper_exact && std::abs(hi - 4.0 * k / (k + 2.0)) <=
                                     1e-12 * hi;
    nondecreasing = nondecreasing && lo >= prev - 1e-12;
    approx_below = approx_below && approx.first <= lo + 1e-12;
    prev = lo;
    if (k == 100) ratio100 = lo / hi;
  }
  const double dt = timer.seconds();
  report(8,
         upper_exact && nondecreasing && approx_below && ratio100 > 0.8 &&
             dt < 30.0,
         std::string("multiplicative channel: upper exact ") +
             (upper_exact ? "yes" : "no") + ", lower nondecreasing " +
             (nondecreasing ? "yes" : "no") + ", approx<=exact " +
             (approx_below ? "yes" : "no") + ", ratio@K=100 " + fmt(ratio100) +
             " (>0.8 required), " + fmt(dt) + "s (<30)");
}

void criterion9() {
  Timer timer;
  const GaussianReference ref = scalar_snr_reference(1.0, 3.0);
  const double eps = 0.5;
  const BoundsResult res = mmse_bounds(ref, eps);
  const LinearEstimator est = lmmse_estimator(ref);
  const Spectrum spec = spectrum(schur_complement(ref));
  double worst_z = 0.0;
  int tag = 0;
  for (const double gamma : {res.gamma_minus, res.gamma_plus}) {
    const Matrix cov = least_favorable_cov(ref, gamma);
    const SampleBatch batch =
        sample_gaussian(ref.mean(), cov, 1000000, 999 + tag++);
    const McEstimate mse = empirical_mse(est, batch, 1, 1);
    worst_z = std::max(worst_z, std::abs(mse.value - bound_value(spec, gamma)) /
                                    mse.std_error);
  }
  const double dt = timer.seconds();
  report(9, worst_z <= 3.0 && dt < 10.0,
         "monte-carlo sandwich: worst z " + fmt(worst_z) + " (<=3), " +
             fmt(dt) + "s (<10)");
}

void criterion10() {
  double lo_min = 1e300, lo_max = 0.0, hi_min = 1e300, hi_max = 0.0;
  for (const double sn2 : {1e-2, 1e-4, 1e-6}) {
    Matrix sx(1, 1), sn(1, 1);
    sx << 1.0;
    sn << sn2;
    const BoundsResult res = mmse_bounds(additive_reference(sx, sn), 0.5);
    lo_min = std::min(lo_min, res.lower / sn2);
    lo_max = std::max(lo_max, res.lower / sn2);
    hi_min = std::min(hi_min, res.upper / sn2);
    hi_max = std::max(hi_max, res.upper / sn2);
  }
  const double var_lo = (lo_max - lo_min) / lo_max;
  const double var_hi = (hi_max - hi_min) / hi_max;

  bool stam = true;
  for (const double p : {1.0, 0.6}) {
    stam = stam && low_snr_floor(gg_entropy(1.0, p), 1) >=
                       1.0 / gg_fisher_information(1.0, p) - 1e-9;
  }
  report(10, var_lo < 0.05 && var_hi < 0.05 && stam,
         "high-snr scaling: lower ratio var " + fmt(var_lo) +
             ", upper ratio var " + fmt(var_hi) + " (<0.05), Stam floor " +
             (stam ? "holds" : "violated"));
}

int run(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void criterion11(const std::string& bin) {
  bool identical = true;
  std::string culprit;
  for (const int id : {1, 2, 5, 6, 7, 8}) {
    const std::string base = "det_fig" + std::to_string(id);
    if (run("MMSE_KL_THREADS=1 " + bin + " fig --id " + std::to_string(id) +
            " --out " + base + "_a.csv") != 0 ||
        run("MMSE_KL_THREADS=8 " + bin + " fig --id " + std::to_string(id) +
            " --out " + base + "_b.csv") != 0 ||
        run("MMSE_KL_THREADS=8 " + bin + " fig --id " + std::to_string(id) +
            " --out " + base + "_c.csv") != 0) {
      identical = false;
      culprit = "fig " + std::to_string(id) + " failed to run";
      break;
    }
    const std::string a = slurp(base + "_a.csv");
    if (a.empty() || a != slurp(base + "_b.csv") ||
        a != slurp(base + "_c.csv")) {
      identical = false;
      culprit = "fig " + std::to_string(id) + " outputs differ";
      break;
    }
  }
  if (identical) {
    run("MMSE_KL_THREADS=1 " + bin +
        " validate --suite all --seed 42 > det_val_a.txt");
    run("MMSE_KL_THREADS=8 " + bin +
        " validate --suite all --seed 42 > det_val_b.txt");
    const std::string a = slurp("det_val_a.txt");
    if (a.empty() || a != slurp("det_val_b.txt")) {
      identical = false;
      culprit = "validate outputs differ";
    }
  }
  report(11, identical,
         identical ? "byte-identical figures and validate output across runs "
                     "and thread counts 1/8"
                   : culprit);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <mmse-kl binary>\n";
    return 2;
  }
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11(std::string("'") + argv[1] + "'");
  std::printf("%d/11 criteria passed\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}
