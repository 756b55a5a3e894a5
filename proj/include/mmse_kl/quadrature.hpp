#pragma once

#include <cmath>
#include <cstddef>
#include <vector>
#include <utility>

#include "mmse_kl/errors.hpp"

namespace mmse_kl {

namespace detail {

// 15-point Kronrod nodes on [0, 1] side (symmetric), with the embedded
// 7-point Gauss rule on the odd-indexed nodes.
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kGk15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGauss7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> gk15(F& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double kronrod = 0.0, gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kGk15Nodes[i];
    const double fsum = (i < 7) ? f(mid - dx) + f(mid + dx) : f(mid);
    kronrod += kGk15Weights[i] * fsum;
    if (i % 2 == 1) gauss += kGauss7Weights[i / 2] * fsum;
  }
  kronrod *= half;
  gauss *= half;
  return {kronrod, std::abs(kronrod - gauss)};
}

struct Panel {
  double a, b, value, err;
};

}  // namespace detail

/// Adaptive 15-point Gauss-Kronrod quadrature of f on [a, b] to the given
/// absolute tolerance. Globally adaptive: the panel with the largest error
/// estimate is bisected until the summed estimate meets the tolerance (or a
/// roundoff floor, whichever is larger). Throws QuadratureFailure if the
/// panel budget is exhausted first.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-10,
                 int max_panels = 4000) {
  if (!(b > a)) return 0.0;
  std::vector<detail::Panel> panels;
  panels.reserve(64);
  {
    const auto [v, e] = detail::gk15(f, a, b);
    panels.push_back({a, b, v, e});
  }
  for (;;) {
    double total = 0.0, total_err = 0.0, abs_total = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      total += panels[i].value;
      abs_total += std::abs(panels[i].value);
      total_err += panels[i].err;
      if (panels[i].err > panels[worst].err) worst = i;
    }
    const double floor_tol = 64.0 * 2.220446049250313e-16 * abs_total;
    if (total_err <= std::max(abs_tol, floor_tol)) return total;
    const detail::Panel hard = panels[worst];
    const double mid = 0.5 * (hard.a + hard.b);
    if (!(mid > hard.a && mid < hard.b) ||
        panels.size() >= static_cast<std::size_t>(max_panels)) {
      throw QuadratureFailure("adaptive quadrature did not reach tolerance");
    }
    const auto [lv, le] = detail::gk15(f, hard.a, mid);
    const auto [rv, re] = detail::gk15(f, mid, hard.b);
    panels[worst] = {hard.a, mid, lv, le};
    panels.push_back({mid, hard.b, rv, re});
  }
}

}  // namespace mmse_kl
