#include "mmse_kl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmse_kl {

namespace {

// Classic Brent root finder on a bracketing interval [a, b] with
// f(a) * f(b) <= 0. Converges when |f| <= f_tol or the bracket collapses.
template <class F>
double brent_root(F&& f, double a, double b, double fa, double fb, double f_tol) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw DomainError("root is not bracketed");

  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < 200; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 =
        2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5e-15;
    const double xm = 0.5 * (c - b);
    if (std::abs(fb) <= f_tol || std::abs(xm) <= tol1) return b;

    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  return b;
}

}  // namespace

double phi(double t) {
  if (t <= -1.0) throw DomainError("phi requires t > -1");
  return std::log1p(t) - t / (1.0 + t);
}

double lambert_w(int branch, double x) {
  if (branch != 0 && branch != -1) throw DomainError("branch must be 0 or -1");
  const double min_x = -std::exp(-1.0);
  if (x < min_x) {
    if (x > min_x * (1.0 + 1e-12)) {
      x = min_x;  // roundoff below the branch point
    } else {
      throw DomainError("lambert_w requires x >= -1/e");
    }
  }
  if (branch == -1 && x >= 0.0) throw DomainError("branch -1 requires x < 0");
  if (branch == 0 && x == 0.0) return 0.0;

  const double p2 = 2.0 * (std::exp(1.0) * x + 1.0);  // 2(1 + e x)
  double w;
  if (p2 < 0.5) {
    const double p = (branch == 0) ? std::sqrt(p2) : -std::sqrt(p2);
    w = -1.0 +
        p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))));
    if (p2 < 1e-14) return w;  // Halley's denominator degenerates at w = -1
  } else if (branch == 0) {
    if (x > 3.0) {
      const double l1 = std::log(x), l2 = std::log(l1);
      w = l1 - l2 + l2 / l1;
    } else if (x >= 0.0) {
      w = std::log1p(x);
    } else {
      w = x / (1.0 + x);
    }
  } else {
    const double l1 = std::log(-x), l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  }

  for (int iter = 0; iter < 50; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (std::abs(f) <= 1e-14 * std::abs(x)) break;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    // Keep the iterate on its branch.
    if (branch == 0 && w < -1.0) w = -1.0 + 1e-12;
    if (branch == -1 && w > -1.0) w = -1.0 - 1e-12;
    if (std::abs(step) <= std::numeric_limits<double>::epsilon() * std::abs(w)) break;
  }
  return w;
}

double omega(int branch, double t) {
  if (branch != 0 && branch != -1) throw DomainError("branch must be 0 or -1");
  if (t < 0.0) {
    if (t > -1e-9) {
      t = 0.0;  // gamma-function roundoff in divergence inputs
    } else {
      throw DomainError("omega requires t >= 0");
    }
  }
  if (t == 0.0) return 1.0;
  const double s = 2.0 * t + 1.0;
  if (s <= 700.0) return -lambert_w(branch, -std::exp(-s));

  // e^{-s} underflows; solve w - log(w) = s on the requested branch.
  if (branch == -1) {
    double w = s + std::log(s);
    for (int iter = 0; iter < 100; ++iter) {
      const double step = (w - std::log(w) - s) / (1.0 - 1.0 / w);
      w -= step;
      if (std::abs(step) <= 1e-16 * w) break;
    }
    return w;
  }
  double u = -s;  // u = log(w) <= 0
  for (int iter = 0; iter < 100; ++iter) {
    const double eu = std::exp(u);
    const double step = (eu - u - s) / (eu - 1.0);
    u -= step;
    if (std::abs(step) <= 1e-16 * std::abs(u)) break;
  }
  return std::exp(u);
}

std::pair<double, double> gamma_brackets(const Spectrum& spec, double eps,
                                         Branch branch) {
  if (eps <= 0.0) throw DomainError("gamma_brackets requires eps > 0");
  const double xi1 = spec.largest();
  if (xi1 <= 0.0) throw DomainError("gamma_brackets requires a nonzero spectrum");
  const double kk = static_cast<double>(spec.size());
  // Pad the endpoints by a small relative margin: for a flat spectrum the
  // interval degenerates to the root itself, and the root finder's last few
  // bits must still land inside.
  const auto pad = [](double lo, double hi) {
    const double margin = 1e-9;
    return std::pair{lo - margin * (std::abs(lo) + 1e-300),
                     hi + margin * (std::abs(hi) + 1e-300)};
  };
  if (branch == Branch::plus) {
    const double wk = omega(0, eps / kk);
    const double w1 = omega(0, eps);
    return pad((1.0 - wk) / (wk * xi1), (1.0 - w1) / (w1 * xi1));
  }
  const double w1 = omega(-1, eps);
  const double wk = omega(-1, eps / kk);
  return pad((1.0 - w1) / (w1 * xi1), (1.0 - wk) / (wk * xi1));
}

double solve_gamma(const Spectrum& spec, double eps, Branch branch) {
  if (eps < 0.0) throw DomainError("solve_gamma requires eps >= 0");
  if (eps == 0.0) return 0.0;
  const double xi1 = spec.largest();
  if (xi1 <= 0.0) throw AllZeroSpectrum("gamma root equation has no solution");

  const auto& xs = spec.eigenvalues();
  const auto g = [&](double gamma) {
    double s = 0.0;
    for (Index i = 0; i < xs.size(); ++i) {
      if (xs[i] > 0.0) s += phi(gamma * xs[i]);
    }
    return s - 2.0 * eps;
  };

  const auto [lo, hi] = gamma_brackets(spec, eps, branch);
  const double width = hi - lo;
  double a, b;
  if (branch == Branch::plus) {
    a = std::max(0.0, lo - 1e-9 * std::max(1.0, std::abs(lo)));
    b = hi + 0.1 * width + 1e-9 * std::max(1.0, std::abs(hi));
  } else {
    a = lo - 0.1 * width - 1e-9 * std::max(1.0, std::abs(lo));
    a = std::max(a, -(1.0 - 1e-12) / xi1);
    b = std::min(0.0, hi + 1e-9 * std::max(1.0, std::abs(hi)));
  }

  double fa = g(a), fb = g(b);
  // Defensive expansion in case omega roundoff nudged a bracket endpoint
  // across the root.
  for (int tries = 0; tries < 64 && (fa > 0.0) == (fb > 0.0); ++tries) {
    if (branch == Branch::plus) {
      b += std::max(width, 1.0) * std::ldexp(1.0, std::min(tries, 40));
      fb = g(b);
    } else {
      a = 0.5 * (a - 1.0 / xi1);  // halve the gap to the domain boundary
      fa = g(a);
    }
  }

  const double f_tol = 1e-12 * std::max(1.0, 2.0 * eps);
  double root = brent_root(g, a, b, fa, fb, f_tol);
  if (branch == Branch::plus && root < 0.0) root = 0.0;
  if (branch == Branch::minus && root > 0.0) root = 0.0;
  return root;
}

double bound_value(const Spectrum& spec, double gamma) {
  const double xi1 = spec.largest();
  if (xi1 > 0.0 && gamma <= -1.0 / xi1) {
    throw GammaOutOfRange("gamma must exceed -1/xi_max");
  }
  const auto& xs = spec.eigenvalues();
  double s = 0.0;
  for (Index i = 0; i < xs.size(); ++i) {
    if (xs[i] > 0.0) s += xs[i] / (1.0 + gamma * xs[i]);
  }
  return s;
}

BoundsResult mmse_bounds(const GaussianReference& ref, double eps) {
  if (eps < 0.0) throw DomainError("mmse_bounds requires eps >= 0");
  const Spectrum spec = spectrum(schur_complement(ref));
  const double tr = spec.sum();

  BoundsResult result;
  result.epsilon = eps;
  result.reference_mmse = tr;
  if (tr == 0.0) {
    // X is determined by Y almost surely; both bounds collapse to zero.
    return result;
  }
  if (eps == 0.0) {
    result.lower = result.upper = tr;
    return result;
  }
  result.gamma_plus = solve_gamma(spec, eps, Branch::plus);
  result.gamma_minus = solve_gamma(spec, eps, Branch::minus);
  result.lower = bound_value(spec, result.gamma_plus);
  result.upper = bound_value(spec, result.gamma_minus);
  return result;
}

std::pair<double, double> flat_spectrum_bounds(double xi0, int k, double eps) {
  if (xi0 <= 0.0) throw DomainError("flat_spectrum_bounds requires xi0 > 0");
  if (k < 1) throw DomainError("flat_spectrum_bounds requires k >= 1");
  if (eps < 0.0) throw DomainError("flat_spectrum_bounds requires eps >= 0");
  const double kk = static_cast<double>(k);
  return {kk * xi0 * omega(0, eps / kk), kk * xi0 * omega(-1, eps / kk)};
}

}  // namespace mmse_kl
