#include "uavcov/numerics/inverse_laplace.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <vector>

namespace uavcov::numerics {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Nodes whose exp(Re(s t)) falls below e^-100 are skipped: their weight is
// far below double resolution of the result while the transform may be
// expensive or ill-conditioned close to the negative real axis.
constexpr double kNegligibleExponent = -100.0;

std::vector<std::complex<double>> evaluate_nodes(const LaplaceFn& transform,
                                                 const std::vector<std::complex<double>>& nodes) {
  std::vector<std::complex<double>> values(nodes.size());
  std::exception_ptr failure;
  const long n = static_cast<long>(nodes.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      values[i] = transform(nodes[i]);
    } catch (...) {
#pragma omp critical(uavcov_inverse_laplace)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return values;
}

// Fixed Talbot contour s(theta) = r theta (cot theta + i), r = 2M / (5t).
double talbot(const LaplaceFn& transform, double t, int m) {
  const double r = 2.0 * m / (5.0 * t);
  std::vector<std::complex<double>> nodes{{r, 0.0}};
  std::vector<std::complex<double>> weights{{0.5 * std::exp(r * t), 0.0}};
  for (int k = 1; k < m; ++k) {
    const double theta = k * kPi / m;
    const double cot = std::cos(theta) / std::sin(theta);
    const std::complex<double> s(r * theta * cot, r * theta);
    if (s.real() * t < kNegligibleExponent) continue;
    const double sigma = theta + (theta * cot - 1.0) * cot;
    nodes.push_back(s);
    weights.push_back(std::exp(s * t) * std::complex<double>(1.0, sigma));
  }
  const auto values = evaluate_nodes(transform, nodes);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += (weights[i] * values[i]).real();
  return r / m * sum;
}

// Abate-Whitt Bromwich trapezoid with binomial (Euler) averaging of the
// alternating tail. Discretisation error is about exp(-A).
double euler(const LaplaceFn& transform, double t, int node_count) {
  constexpr double A = 18.4;
  constexpr int kAveraging = 11;
  const int burn_in = std::max(1, node_count - kAveraging - 1);
  const int terms = burn_in + kAveraging;
  const double a = A / (2.0 * t);
  std::vector<std::complex<double>> nodes;
  nodes.reserve(terms + 1);
  for (int k = 0; k <= terms; ++k) nodes.emplace_back(a, k * kPi / t);
  const auto values = evaluate_nodes(transform, nodes);

  const double scale = std::exp(A / 2.0) / t;
  std::vector<double> partial(terms + 1);
  double acc = 0.5 * values[0].real();
  partial[0] = scale * acc;
  for (int k = 1; k <= terms; ++k) {
    acc += (k % 2 == 0 ? 1.0 : -1.0) * values[k].real();
    partial[k] = scale * acc;
  }
  double result = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= kAveraging; ++j) {
    result += binom * partial[burn_in + j];
    binom = binom * (kAveraging - j) / (j + 1);
  }
  return result / std::pow(2.0, kAveraging);
}

}  // namespace

double inverse_laplace(const LaplaceFn& transform, double t, const InverseLaplaceSpec& spec) {
  if (!(t > 0)) throw std::domain_error("inverse_laplace: t must be > 0");
  if (spec.node_count < 8) throw std::invalid_argument("inverse_laplace: node_count must be >= 8");
  return spec.method == InversionMethod::Talbot ? talbot(transform, t, spec.node_count)
                                                : euler(transform, t, spec.node_count);
}

CdfInversion inverse_laplace_cdf(const LaplaceFn& transform, double t,
                                 const InverseLaplaceSpec& spec) {
  const LaplaceFn integrated = [&transform](std::complex<double> s) { return transform(s) / s; };
  const double raw = inverse_laplace(integrated, t, spec);
  const double value = std::clamp(raw, 0.0, 1.0);
  return {value, raw, std::abs(raw - value) > 1e-3};
}

}  // namespace uavcov::numerics
