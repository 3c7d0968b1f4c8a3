#pragma once

// Adaptive Gauss-Legendre quadrature and Romberg integration.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace qslora::quadrature {

namespace detail {

inline constexpr std::size_t gl_order = 10;

struct GaussLegendreRule {
  std::array<double, gl_order> nodes{};
  std::array<double, gl_order> weights{};
};

// Roots of P_n by Newton iteration from the Chebyshev initial guess.
inline const GaussLegendreRule& gauss_legendre_rule() {
  static const GaussLegendreRule rule = [] {
    GaussLegendreRule r;
    constexpr auto n = static_cast<int>(gl_order);
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) {
          break;
        }
      }
      r.nodes[static_cast<std::size_t>(i)] = x;
      r.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

template <class F>
double gauss_legendre(F& f, double a, double b) {
  const auto& rule = gauss_legendre_rule();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double acc = 0.0;
  for (std::size_t i = 0; i < gl_order; ++i) {
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * acc;
}

struct AdaptState {
  double relative = 0.0;
  int max_depth = 40;
  long budget = 0;
};

template <class F>
double adapt(F& f, double a, double b, double whole, double tol, int depth, AdaptState& state) {
  const double mid = 0.5 * (a + b);
  const double left = gauss_legendre(f, a, mid);
  const double right = gauss_legendre(f, mid, b);
  const double refined = left + right;
  const double err = std::abs(refined - whole);
  if (err <= tol || err <= state.relative * std::abs(refined)) {
    return refined;
  }
  if (depth >= state.max_depth || --state.budget <= 0) {
    std::ostringstream msg;
    msg << "adaptive quadrature did not converge on [" << a << ", " << b << "]: |delta| = " << err
        << " > tol " << tol << " after " << depth << " bisections";
    throw numerical_error(msg.str());
  }
  return adapt(f, a, mid, left, 0.5 * tol, depth + 1, state) +
         adapt(f, mid, b, right, 0.5 * tol, depth + 1, state);
}

}  // namespace detail

struct Tolerance {
  double absolute = 1e-10;
  int max_depth = 40;
  // accept a subinterval once its error estimate is below relative * |value|
  double relative = 0.0;
  long max_subdivisions = 1'000'000;
};

// Integrates f over [a, b]; the interval is bisected until the 10-point
// rule on each half agrees with the parent estimate within tol (the
// absolute tolerance is split between the two halves).
template <class F>
double integrate(F&& f, double a, double b, Tolerance tol = {}) {
  if (a == b) {
    return 0.0;
  }
  if (b < a) {
    return -integrate(f, b, a, tol);
  }
  const double whole = detail::gauss_legendre(f, a, b);
  detail::AdaptState state{tol.relative, tol.max_depth, tol.max_subdivisions};
  return detail::adapt(f, a, b, whole, tol.absolute, 0, state);
}

// Integrates f over consecutive pieces [points[i], points[i+1]]; use when
// the integrand has kinks or jumps at known locations.
template <class F>
double integrate_pieces(F&& f, const std::vector<double>& points, Tolerance tol = {}) {
  double total = 0.0;
  const auto pieces = points.size() > 1 ? points.size() - 1 : 0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    Tolerance piece_tol = tol;
    piece_tol.absolute = tol.absolute / static_cast<double>(pieces);
    total += integrate(f, points[i], points[i + 1], piece_tol);
  }
  return total;
}

// Romberg integration: composite trapezoid starting from `panels` panels,
// doubled until successive extrapolated estimates change by less than tol.
template <class F>
auto romberg(F&& f, double a, double b, std::size_t panels, double tol, int max_levels = 16)
    -> decltype(f(a)) {
  using value_type = decltype(f(a));
  if (panels == 0) {
    panels = 1;
  }
  std::vector<std::vector<value_type>> table;
  double h = (b - a) / static_cast<double>(panels);
  value_type trap = 0.5 * (f(a) + f(b));
  for (std::size_t i = 1; i < panels; ++i) {
    trap += f(a + static_cast<double>(i) * h);
  }
  table.push_back({trap * h});
  value_type sum_all = trap;
  std::size_t n = panels;
  for (int level = 1; level < max_levels; ++level) {
    value_type midpoints{};
    for (std::size_t i = 0; i < n; ++i) {
      midpoints += f(a + (static_cast<double>(i) + 0.5) * h);
    }
    sum_all += midpoints;
    n *= 2;
    h *= 0.5;
    std::vector<value_type> row{sum_all * h};
    double factor = 4.0;
    for (std::size_t j = 1; j <= static_cast<std::size_t>(level); ++j) {
      row.push_back(row[j - 1] + (row[j - 1] - table.back()[j - 1]) / (factor - 1.0));
      factor *= 4.0;
    }
    const double change = std::abs(row.back() - table.back().back());
    table.push_back(std::move(row));
    if (level >= 2 && change < tol) {
      return table.back().back();
    }
  }
  std::ostringstream msg;
  msg << "Romberg integration on [" << a << ", " << b << "] did not reach tol " << tol << " in "
      << max_levels << " levels";
  throw numerical_error(msg.str());
}

}  // namespace qslora::quadrature
