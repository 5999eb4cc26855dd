#pragma once

#include <vector>

#include "uavcov/model.hpp"

namespace uavcov {

// Distance laws of N points uniform on a corridor segment [-R, R] at height h,
// seen from the ground origin. Only the horizontal offset |u| ~ U(0, R)
// matters, so a link distance is d = sqrt(h^2 + x^2) with x uniform on [0, R].

struct DistanceSupport {
  double lower_m;
  double upper_m;
  double width() const { return upper_m - lower_m; }
  bool contains(double d) const { return d >= lower_m && d <= upper_m; }
};

DistanceSupport link_support(const NetworkConfig& config);
/// [r, sqrt(h^2 + R^2)]. Throws std::domain_error when r lies outside the
/// serving-distance support.
DistanceSupport interferer_support(const NetworkConfig& config, double r);

/// Horizontal offset sqrt(d^2 - h^2), clamped at zero.
double horizontal_offset(const NetworkConfig& config, double d);

/// Density of the nearest-UAV distance. Zero outside (h, sqrt(h^2+R^2));
/// +infinity at r == h where the density has an integrable singularity.
double serving_pdf(const NetworkConfig& config, double r);
double serving_cdf(const NetworkConfig& config, double r);
/// Serving density in the horizontal offset x: N/R (1 - x/R)^(N-1) on [0, R].
double serving_offset_pdf(const NetworkConfig& config, double x);

double link_cdf(const NetworkConfig& config, double d);
/// +infinity at d == h, zero outside the support.
double link_pdf(const NetworkConfig& config, double d);

/// Density of one non-serving distance given serving distance r, i.e.
/// link_pdf(v) / (1 - link_cdf(r)) on [r, sqrt(h^2+R^2)].
double interferer_pdf_given_r(const NetworkConfig& config, double r, double v);
double interferer_cdf_given_r(const NetworkConfig& config, double r, double v);
/// Inverse of interferer_cdf_given_r for u in [0, 1].
double interferer_quantile_given_r(const NetworkConfig& config, double r, double u);

struct NetworkRealization {
  std::vector<double> offsets;            // u_i in [-R, R]
  std::vector<double> link_distances;     // d_i, same order as offsets
  std::vector<double> ordered_distances;  // r_1 <= ... <= r_N
  int serving_index = 0;                  // index into offsets of the nearest UAV

  double serving_distance() const { return ordered_distances.front(); }
};

NetworkRealization sample_corridor(const NetworkConfig& config, Rng& rng);

}  // namespace uavcov
