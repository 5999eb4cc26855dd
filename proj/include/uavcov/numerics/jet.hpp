#pragma once

#include <vector>

#include <boost/container/small_vector.hpp>

#include "uavcov/numerics/quadrature.hpp"

namespace uavcov::numerics {

/// Truncated Taylor series f(s0 + e) = sum_k c_k e^k, k = 0..order.
/// Coefficient k is f^(k)(s0) / k!.
class Jet {
 public:
  Jet() = default;
  using Storage = boost::container::small_vector<double, 8>;

  explicit Jet(int order) : c_(static_cast<std::size_t>(order) + 1, 0.0) {}
  explicit Jet(const std::vector<double>& coeffs);

  static Jet constant(int order, double value);
  /// The identity map s -> s expanded at s0.
  static Jet variable(int order, double s0);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
  double operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  const Storage& coeffs() const { return c_; }
  double value() const { return c_.front(); }
  /// k-th derivative at the expansion point.
  double derivative(int k) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);

 private:
  Storage c_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(double s, Jet a);
Jet operator*(Jet a, double s);
/// Cauchy product truncated at the common order.
Jet operator*(const Jet& a, const Jet& b);

/// a^p for real p; requires a.value() > 0 unless p is a non-negative integer.
Jet pow(const Jet& a, double p);
Jet exp(const Jet& a);
/// Requires a.value() > 0.
Jet log(const Jet& a);

double quad_norm(const Jet& j);

/// Coefficient-wise integral of a Jet-valued integrand over [a, b] (b may be
/// +infinity). Integration is linear, so the result is the jet of the integral.
template <class KernelJet>
QuadResult<Jet> jet_eval(KernelJet&& kernel, double a, double b, const QuadratureSpec& spec = {}) {
  if (std::isinf(b)) return integrate_semi_infinite(kernel, a, spec);
  return integrate_adaptive(kernel, a, b, spec);
}

}  // namespace uavcov::numerics
