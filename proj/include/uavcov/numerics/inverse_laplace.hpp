#pragma once

#include <complex>
#include <functional>

namespace uavcov::numerics {

enum class InversionMethod { Talbot, EulerSummation };

struct InverseLaplaceSpec {
  InversionMethod method = InversionMethod::Talbot;
  /// Talbot: contour nodes M. Euler: total number of transform evaluations.
  int node_count = 48;
};

using LaplaceFn = std::function<std::complex<double>(std::complex<double>)>;

/// f(t) from its transform F(s). Transform evaluations may run concurrently;
/// the sum is reduced in node order.
double inverse_laplace(const LaplaceFn& transform, double t, const InverseLaplaceSpec& spec = {});

struct CdfInversion {
  double value;  // clamped to [0, 1]
  double raw;
  /// |raw - value| > 1e-3.
  bool warning;
};

/// CDF at t of a positive random variable whose density has Laplace
/// transform `transform`, by inverting transform(s) / s.
CdfInversion inverse_laplace_cdf(const LaplaceFn& transform, double t,
                                 const InverseLaplaceSpec& spec = {});

}  // namespace uavcov::numerics
