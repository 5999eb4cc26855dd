#include "uavcov/numerics/jet.hpp"

#include <cmath>
#include <stdexcept>

namespace uavcov::numerics {

Jet::Jet(const std::vector<double>& coeffs) : c_(coeffs.begin(), coeffs.end()) {
  if (c_.empty()) throw std::invalid_argument("Jet: at least one coefficient required");
}

Jet Jet::constant(int order, double value) {
  Jet j(order);
  j[0] = value;
  return j;
}

Jet Jet::variable(int order, double s0) {
  Jet j(order);
  j[0] = s0;
  if (order >= 1) j[1] = 1.0;
  return j;
}

double Jet::derivative(int k) const {
  double factorial = 1.0;
  for (int i = 2; i <= k; ++i) factorial *= i;
  return (*this)[k] * factorial;
}

Jet& Jet::operator+=(const Jet& o) {
  if (o.order() != order()) throw std::invalid_argument("Jet: order mismatch");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (o.order() != order()) throw std::invalid_argument("Jet: order mismatch");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator*(Jet a, double s) { return a *= s; }

Jet operator*(const Jet& a, const Jet& b) {
  if (a.order() != b.order()) throw std::invalid_argument("Jet: order mismatch");
  const int n = a.order();
  Jet out(n);
  for (int k = 0; k <= n; ++k) {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) acc += a[j] * b[k - j];
    out[k] = acc;
  }
  return out;
}

Jet pow(const Jet& a, double p) {
  const int n = a.order();
  if (a.value() == 0.0) {
    // Only integer powers are defined at a zero base; fall back to products.
    if (p < 0 || p != std::floor(p)) throw std::domain_error("Jet pow: zero base");
    Jet out = Jet::constant(n, 1.0);
    for (int i = 0; i < static_cast<int>(p); ++i) out = out * a;
    return out;
  }
  if (a.value() < 0 && p != std::floor(p)) throw std::domain_error("Jet pow: negative base");
  // b = a^p  =>  a b' = p a' b, solved order by order.
  Jet b(n);
  b[0] = std::pow(a[0], p);
  for (int k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += (p * j - (k - j)) * a[j] * b[k - j];
    b[k] = acc / (k * a[0]);
  }
  return b;
}

Jet exp(const Jet& a) {
  const int n = a.order();
  Jet b(n);
  b[0] = std::exp(a[0]);
  for (int k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * a[j] * b[k - j];
    b[k] = acc / k;
  }
  return b;
}

Jet log(const Jet& a) {
  if (!(a.value() > 0)) throw std::domain_error("Jet log: non-positive value");
  const int n = a.order();
  Jet b(n);
  b[0] = std::log(a[0]);
  for (int k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (int j = 1; j < k; ++j) acc += j * b[j] * a[k - j];
    b[k] = (a[k] - acc / k) / a[0];
  }
  return b;
}

double quad_norm(const Jet& j) {
  double m = 0.0;
  for (double x : j.coeffs()) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace uavcov::numerics
