// Copyright 2026 The abc-rates Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "abcr/errors.hpp"
#include "abcr/model.hpp"

// Gaussian toy problem with every quantity of interest available in closed
// form: prior theta ~ N(0,1), data X_i | theta ~ N(theta, 1) i.i.d. for
// i = 1,2, summary S(x) = x.  Marginally S is bivariate normal with mean 0
// and covariance [[2,1],[1,2]], and theta | S = s is N((s1+s2)/3, 1/3).

namespace abcr::toy {

/// Standard normal CDF, absolute error below 1e-12 for all finite x.
/// Evaluates Phi(x) = 1/2 + phi(x) * (x + x^3/3 + x^5/(3*5) + ...) in
/// extended precision; the series terms all share the sign of x, so there is
/// no cancellation inside the sum.
inline double std_normal_cdf(double x) {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (x <= -40.0) return 0.0;
  if (x >= 40.0) return 1.0;
  const long double xx = x;
  const long double q = xx * xx;
  long double term = xx;
  long double sum = xx;
  long double prev = 0.0L;
  for (int i = 3; sum != prev; i += 2) {
    prev = sum;
    term *= q / i;
    sum += term;
  }
  constexpr long double kLogSqrt2Pi = 0.918938533204672741780329736406L;
  long double result = 0.5L + sum * std::exp(-0.5L * q - kLogSqrt2Pi);
  if (result < 0.0L) result = 0.0L;
  if (result > 1.0L) result = 1.0L;
  return static_cast<double>(result);
}

/// Indicator test function h(theta) = 1[lo <= theta <= hi].
struct IndicatorTest {
  double lo = -0.5;
  double hi = 0.5;
};

inline TestFunction make_indicator(const IndicatorTest& test) {
  return [test](std::span<const double> theta) {
    return (theta[0] >= test.lo && theta[0] <= test.hi) ? 1.0 : 0.0;
  };
}

inline std::vector<double> default_s_star() { return {1.0, 1.0}; }

/// The toy generative model as a pluggable ModelSpec (p=1, d=2, q=2).
inline ModelSpec toy_model() {
  ModelSpec model;
  model.p = 1;
  model.d = 2;
  model.q = 2;
  model.prior_sample = [](Rng& rng, std::span<double> out) {
    out[0] = rng.normal();
  };
  model.simulate = [](std::span<const double> theta, Rng& rng,
                      std::span<double> out) {
    out[0] = theta[0] + rng.normal();
    out[1] = theta[0] + rng.normal();
  };
  model.summary = [](std::span<const double> data, std::span<double> out) {
    out[0] = data[0];
    out[1] = data[1];
  };
  return model;
}

/// P(lo <= theta <= hi | S = s); theta | S = s is N((s1+s2)/3, 1/3).
inline double posterior_interval_probability(std::span<const double> s,
                                             const IndicatorTest& test) {
  const double mu = (s[0] + s[1]) / 3.0;
  const double sigma = 1.0 / std::sqrt(3.0);
  return std_normal_cdf((test.hi - mu) / sigma) -
         std_normal_cdf((test.lo - mu) / sigma);
}

/// P(lo <= theta <= hi) under the prior theta ~ N(0,1).
inline double prior_interval_probability(const IndicatorTest& test) {
  return std_normal_cdf(test.hi) - std_normal_cdf(test.lo);
}

/// Marginal summary density f_S(s) = exp(-(s1^2 - s1 s2 + s2^2)/3)/(2 pi sqrt(3)).
inline double f_S(std::span<const double> s) {
  constexpr double kNorm = 0.09188814923696534;  // 1/(2 pi sqrt(3))
  const double quad = s[0] * s[0] - s[0] * s[1] + s[1] * s[1];
  return kNorm * std::exp(-quad / 3.0);
}

/// phi_h(s) = f_S(s) * E(h(theta) | S = s) for the indicator h.
inline double phi_h(std::span<const double> s, const IndicatorTest& test) {
  return f_S(s) * posterior_interval_probability(s, test);
}

/// Mean, variance and hit probability of h(theta) conditional on S falling
/// in the ball B(s*, delta).
struct BallMoments {
  double delta = 0.0;
  double y_delta = 0.0;       ///< E(h(theta) | S in B(s*, delta))
  double sigma2_delta = 0.0;  ///< Var(h(theta) | S in B(s*, delta))
  double p_delta = 0.0;       ///< P(S in B(s*, delta))
};

namespace detail {

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre polynomials.
inline void gauss_legendre(int m, std::vector<double>& nodes,
                           std::vector<double>& weights) {
  nodes.resize(static_cast<std::size_t>(m));
  weights.resize(static_cast<std::size_t>(m));
  const int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = m * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    nodes[static_cast<std::size_t>(i)] = -z;
    nodes[static_cast<std::size_t>(m - 1 - i)] = z;
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(m - 1 - i)] = w;
  }
}

/// Integrals of f_S and phi_h over the disk B(s*, delta), in polar
/// coordinates with Gauss-Legendre in radius and the rectangle rule in angle
/// (spectrally accurate for periodic integrands).
inline void disk_integrals(std::span<const double> s_star, double delta,
                           const IndicatorTest& test, int n_radial,
                           int n_angular, double& integral_1,
                           double& integral_h) {
  std::vector<double> nodes, weights;
  gauss_legendre(n_radial, nodes, weights);
  const double angle_step = 2.0 * M_PI / n_angular;
  double sum1 = 0.0, sumh = 0.0;
  double point[2];
  for (int i = 0; i < n_radial; ++i) {
    const double r = 0.5 * delta * (nodes[static_cast<std::size_t>(i)] + 1.0);
    const double wr = 0.5 * delta * weights[static_cast<std::size_t>(i)] * r;
    for (int j = 0; j < n_angular; ++j) {
      const double angle = angle_step * j;
      point[0] = s_star[0] + r * std::cos(angle);
      point[1] = s_star[1] + r * std::sin(angle);
      const double f = f_S(point);
      sum1 += wr * f;
      sumh += wr * f * posterior_interval_probability(point, test);
    }
  }
  integral_1 = sum1 * angle_step;
  integral_h = sumh * angle_step;
}

}  // namespace detail

/// Computes the ball moments by adaptive polar quadrature: the node counts
/// double until successive refinements agree to 1e-9 relative, up to 2^20
/// total nodes (QuadratureNotConvergedError beyond that).
inline BallMoments ball_moments(std::span<const double> s_star, double delta,
                                const IndicatorTest& test) {
  if (s_star.size() != 2) {
    throw DimensionMismatchError("ball_moments: s_star must have length 2");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw InvalidArgumentError("ball_moments: delta must be positive and finite");
  }

  constexpr double kRelTol = 1e-9;
  constexpr long kMaxNodes = 1L << 20;
  int n_radial = 8;
  int n_angular = 16;
  double i1_prev = 0.0, ih_prev = 0.0;
  bool have_prev = false;
  for (;;) {
    if (static_cast<long>(n_radial) * n_angular > kMaxNodes) {
      throw QuadratureNotConvergedError(
          "ball_moments: no convergence within " + std::to_string(kMaxNodes) +
          " nodes at delta = " + std::to_string(delta));
    }
    double i1 = 0.0, ih = 0.0;
    detail::disk_integrals(s_star, delta, test, n_radial, n_angular, i1, ih);
    if (have_prev) {
      const double err1 = std::abs(i1 - i1_prev);
      const double errh = std::abs(ih - ih_prev);
      const double floor1 = std::max(std::abs(i1), 1e-300);
      const double floorh = std::max(std::abs(ih), 1e-300);
      if (err1 <= kRelTol * floor1 && errh <= kRelTol * floorh) {
        BallMoments moments;
        moments.delta = delta;
        moments.p_delta = i1;
        moments.y_delta = ih / i1;
        moments.sigma2_delta = moments.y_delta * (1.0 - moments.y_delta);
        return moments;
      }
    }
    i1_prev = i1;
    ih_prev = ih;
    have_prev = true;
    n_radial *= 2;
    n_angular *= 2;
  }
}

/// Bias curvature constant
///   C(s*) = (lap phi_h(s*) - y * lap phi_1(s*)) / (2 (q+2) phi_1(s*))
/// with q = 2 and y = phi_h(s*)/phi_1(s*); Laplacians by central second
/// differences per axis (error O(fd_step^2)).
inline double bias_constant(std::span<const double> s_star,
                            const IndicatorTest& test, double fd_step = 1e-2) {
  if (s_star.size() != 2) {
    throw DimensionMismatchError("bias_constant: s_star must have length 2");
  }
  if (!(fd_step >= 1e-4 && fd_step <= 1e-1)) {
    throw InvalidArgumentError("bias_constant: fd_step must lie in [1e-4, 1e-1]");
  }
  const int q = 2;
  const double f0 = f_S(s_star);
  const double g0 = phi_h(s_star, test);
  const double y = g0 / f0;

  double lap_1 = 0.0, lap_h = 0.0;
  double point[2] = {s_star[0], s_star[1]};
  for (int axis = 0; axis < 2; ++axis) {
    const double center = point[axis];
    point[axis] = center + fd_step;
    const double f_plus = f_S(point);
    const double g_plus = phi_h(point, test);
    point[axis] = center - fd_step;
    const double f_minus = f_S(point);
    const double g_minus = phi_h(point, test);
    point[axis] = center;
    lap_1 += (f_plus - 2.0 * f0 + f_minus) / (fd_step * fd_step);
    lap_h += (g_plus - 2.0 * g0 + g_minus) / (fd_step * fd_step);
  }
  return (lap_h - y * lap_1) / (2.0 * (q + 2) * f0);
}

/// D_opt = (q Var(h|S=s*) / (4 C(s*)^2))^{1/4}, the optimal constant in the
/// tolerance schedule delta_n = D n^{-1/4}.
inline double d_opt_formula(int q, double variance_at_s_star,
                            double bias_const) {
  if (q < 1) throw InvalidArgumentError("d_opt_formula: q must be >= 1");
  if (std::abs(bias_const) <= 1e-10) {
    throw DegenerateCurvatureError(
        "d_opt_formula: |C(s*)| <= 1e-10, the schedule constant is undefined");
  }
  if (variance_at_s_star <= 0.0) {
    throw InvalidArgumentError("d_opt_formula: variance must be positive");
  }
  return std::pow(q * variance_at_s_star / (4.0 * bias_const * bias_const),
                  0.25);
}

inline double d_opt(std::span<const double> s_star, const IndicatorTest& test) {
  const double y = posterior_interval_probability(s_star, test);
  const double variance = y * (1.0 - y);
  return d_opt_formula(2, variance, bias_constant(s_star, test));
}

}  // namespace abcr::toy
