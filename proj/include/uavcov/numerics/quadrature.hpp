#pragma once

// Globally adaptive Gauss-Kronrod (10/21) quadrature for any value type that
// forms a vector space over double: double, std::complex<double>, Jet, ...
// A value type provides `double quad_norm(const T&)`.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace uavcov::numerics {

enum class SemiInfiniteMap { Rational, Exponential };

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 200;
  SemiInfiniteMap semi_infinite_map = SemiInfiniteMap::Rational;

  /// Spec for one nesting level deeper: tolerances divided by `factor`.
  QuadratureSpec nested(double factor = 10.0) const {
    QuadratureSpec s = *this;
    s.rel_tol /= factor;
    s.abs_tol /= factor;
    return s;
  }
};

template <class T>
struct QuadResult {
  T value;
  double abs_error = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}
  double estimate() const { return estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

inline double quad_norm(double v) { return std::abs(v); }
inline double quad_norm(const std::complex<double>& v) { return std::abs(v); }
template <std::size_t K>
double quad_norm(const std::array<double, K>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}
template <std::size_t K>
std::array<double, K> operator+(std::array<double, K> a, const std::array<double, K>& b) {
  for (std::size_t i = 0; i < K; ++i) a[i] += b[i];
  return a;
}
template <std::size_t K>
std::array<double, K> operator-(std::array<double, K> a, const std::array<double, K>& b) {
  for (std::size_t i = 0; i < K; ++i) a[i] -= b[i];
  return a;
}
template <std::size_t K>
std::array<double, K> operator*(double s, std::array<double, K> a) {
  for (double& x : a) x *= s;
  return a;
}

namespace detail {

// Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
inline constexpr std::array<double, 11> kXgk = {
    0.0,
    0.14887433898163121088,
    0.29439286270146019813,
    0.43339539412924719080,
    0.56275713466860468334,
    0.67940956829902440623,
    0.78081772658641689706,
    0.86506336668898451073,
    0.93015749135570822600,
    0.97390652851717172008,
    0.99565716302580808074};
inline constexpr std::array<double, 11> kWgk = {
    0.14944555400291690566, 0.14773910490133849137, 0.14277593857706008080,
    0.13470921731147332593, 0.12349197626206585108, 0.10938715880229764190,
    0.09312545458369760554, 0.07503967481091995277, 0.05475589657435199603,
    0.03255816230796472748, 0.01169463886737187428};
inline constexpr std::array<double, 5> kWg = {0.29552422471475287017, 0.26926671930999635509,
                                              0.21908636251598204400, 0.14945134915058059315,
                                              0.06667134430868813759};

template <class T>
struct Segment {
  double a;
  double b;
  T value;
  double error;
};

template <class T, class F>
Segment<T> gauss_kronrod21(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T resk = kWgk[0] * fc;
  T resg = 0.0 * fc;
  std::array<T, 10> f1;
  std::array<T, 10> f2;
  f1.fill(fc);
  f2.fill(fc);
  for (int j = 1; j <= 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j - 1] = f(center - dx);
    f2[j - 1] = f(center + dx);
    const T pair = f1[j - 1] + f2[j - 1];
    resk = resk + kWgk[j] * pair;
    if (j % 2 == 1) resg = resg + kWg[j / 2] * pair;
  }
  // QUADPACK-style error scaling using the mean absolute deviation.
  const T mean = 0.5 * resk;
  double resasc = kWgk[0] * quad_norm(fc - mean);
  for (int j = 1; j <= 10; ++j)
    resasc += kWgk[j] * (quad_norm(f1[j - 1] - mean) + quad_norm(f2[j - 1] - mean));
  resasc *= std::abs(half);
  double err = quad_norm(resk - resg) * std::abs(half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  return {a, b, half * resk, err};
}

}  // namespace detail

/// Adaptive integral of f over the finite interval [a, b].
template <class F>
auto integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec = {})
    -> QuadResult<std::decay_t<std::invoke_result_t<F&, double>>> {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  using Seg = detail::Segment<T>;
  if (!(spec.rel_tol > 0) || !(spec.abs_tol > 0))
    throw std::invalid_argument("QuadratureSpec: tolerances must be positive");

  auto by_error = [](const Seg& x, const Seg& y) { return x.error < y.error; };
  std::vector<Seg> heap;
  heap.reserve(static_cast<std::size_t>(spec.max_subdivisions) + 1);
  heap.push_back(detail::gauss_kronrod21<T>(f, a, b));

  auto totals = [&heap]() {
    std::vector<const Seg*> ordered;
    ordered.reserve(heap.size());
    for (const Seg& s : heap) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(), [](const Seg* x, const Seg* y) { return x->a < y->a; });
    T value = ordered.front()->value;
    double error = ordered.front()->error;
    for (std::size_t i = 1; i < ordered.size(); ++i) {
      value = value + ordered[i]->value;
      error += ordered[i]->error;
    }
    return std::make_pair(value, error);
  };

  T value = heap.front().value;
  double error = heap.front().error;
  const double min_width = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(b - a);
  while (error > std::max(spec.abs_tol, spec.rel_tol * quad_norm(value)) &&
         static_cast<int>(heap.size()) < spec.max_subdivisions) {
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Seg worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (std::abs(worst.b - worst.a) < min_width) {
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), by_error);
      break;
    }
    heap.push_back(detail::gauss_kronrod21<T>(f, worst.a, mid));
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(detail::gauss_kronrod21<T>(f, mid, worst.b));
    std::push_heap(heap.begin(), heap.end(), by_error);
    std::tie(value, error) = totals();
  }
  std::tie(value, error) = totals();
  const bool ok = error <= std::max(spec.abs_tol, spec.rel_tol * quad_norm(value));
  return {value, error, static_cast<int>(heap.size()), ok};
}

/// Adaptive integral of f over [a, +inf) through a map onto (0, 1).
template <class F>
auto integrate_semi_infinite(F&& f, double a, const QuadratureSpec& spec = {}) {
  if (spec.semi_infinite_map == SemiInfiniteMap::Rational) {
    // x = a + u / (1 - u), dx = du / (1 - u)^2
    auto mapped = [&f, a](double u) {
      const double w = 1.0 - u;
      return (1.0 / (w * w)) * f(a + u / w);
    };
    return integrate_adaptive(mapped, 0.0, 1.0, spec);
  }
  // x = a - log(1 - u), dx = du / (1 - u)
  auto mapped = [&f, a](double u) {
    const double w = 1.0 - u;
    return (1.0 / w) * f(a - std::log(w));
  };
  return integrate_adaptive(mapped, 0.0, 1.0, spec);
}

/// Scalar integral over [a, b] where b may be +infinity. Throws AccuracyError
/// with the best estimate when the tolerance is not met.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  QuadResult<double> r = std::isinf(b) ? integrate_semi_infinite(f, a, spec)
                                       : integrate_adaptive(f, a, b, spec);
  if (!r.converged)
    throw AccuracyError("integrate: tolerance not met after " + std::to_string(r.subdivisions) +
                            " subdivisions",
                        r.value, r.abs_error);
  return r.value;
}

}  // namespace uavcov::numerics
