#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library's quadrature, jets or Laplace inversion.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Kolmogorov-Smirnov statistic of `samples` against `cdf`.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

/// Asymptotic KS critical value at level 0.01.
inline double ks_critical_001(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

/// k-th derivative of f at x by a central difference of order-2 accuracy.
inline double central_derivative(const std::function<double(double)>& f, double x, int k,
                                 double h) {
  // Binomial stencil: sum_j (-1)^j C(k, j) f(x + (k/2 - j) h) / h^k.
  double sum = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    sum += ((j % 2) ? -1.0 : 1.0) * binom * f(x + (0.5 * k - j) * h);
    binom = binom * (k - j) / (j + 1);
  }
  return sum / std::pow(h, k);
}

/// Richardson-extrapolated k-th derivative (two step sizes).
inline double derivative(const std::function<double(double)>& f, double x, int k, double h) {
  const double d1 = central_derivative(f, x, k, h);
  const double d2 = central_derivative(f, x, k, h / 2);
  return (4.0 * d2 - d1) / 3.0;
}

/// E[(X_1 + ... + X_n)^2] for i.i.d. X_i with the given first two moments,
/// summed literally over all multi-indices with |k| = 2 via the multinomial
/// theorem: sum 2!/(k_1!...k_n!) prod E[X^{k_i}].
inline double multinomial_second_moment(int n, double m1, double m2) {
  double total = 0.0;
  std::vector<int> k(static_cast<std::size_t>(n), 0);
  // Enumerate all compositions of 2 into n non-negative parts.
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == n - 1) {
      k[pos] = left;
      double coeff = 2.0;  // 2!
      double prod = 1.0;
      for (int ki : k) {
        if (ki == 2) coeff /= 2.0;
        prod *= ki == 0 ? 1.0 : ki == 1 ? m1 : m2;
      }
      total += coeff * prod;
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, 2);
  return total;
}

inline double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

inline double quantile(std::vector<double> v, double p) {
  const std::size_t i = static_cast<std::size_t>(p * (v.size() - 1));
  std::nth_element(v.begin(), v.begin() + static_cast<long>(i), v.end());
  return v[i];
}

/// Regularized upper incomplete gamma Q(a, x) for integer a (finite sum).
inline double q_integer(int a, double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < a; ++k) sum += (term *= x / k);
  return std::exp(-x) * sum;
}

/// Conditional interference transform E[exp(-s I) | r] with N - 1
/// interferers, by Simpson over the offset x in [x_r, R] and over
/// G ~ Gamma(q, 1) where the shadowing is gamma / G.
struct CorridorLink {
  int n_uavs;
  double altitude, radius, alpha, path_loss_k, tx_power;
  int fading_m;
  double shadow_q, shadow_gamma;
};

inline double interference_laplace(const CorridorLink& c, double r, double s, int x_panels = 400,
                                   int g_panels = 6000) {
  const double h2 = c.altitude * c.altitude;
  const double xr = std::sqrt(r * r - h2);
  const double q = c.shadow_q;
  const int m = c.fading_m;
  auto over_x = [&](double x) {
    const double mean_power = c.tx_power * c.path_loss_k * std::pow(h2 + x * x, -0.5 * c.alpha);
    return simpson(
        [&](double g) {
          if (g <= 0) return 0.0;
          const double dens = std::exp((q - 1) * std::log(g) - g - std::lgamma(q));
          return dens * std::pow(1.0 + s * mean_power * (c.shadow_gamma / g) / m, -m);
        },
        0.0, 60.0, g_panels);
  };
  const double j = simpson(over_x, xr, c.radius, x_panels) / (c.radius - xr);
  return std::pow(j, c.n_uavs - 1);
}

}  // namespace oracle
