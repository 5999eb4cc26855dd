#include "uavcov/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace uavcov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

DistanceSupport link_support(const NetworkConfig& config) {
  return {config.altitude_m, config.max_distance()};
}

DistanceSupport interferer_support(const NetworkConfig& config, double r) {
  const DistanceSupport link = link_support(config);
  if (!(r >= link.lower_m && r < link.upper_m))
    throw std::domain_error("interferer support: serving distance outside [h, sqrt(h^2+R^2))");
  return {r, link.upper_m};
}

double horizontal_offset(const NetworkConfig& config, double d) {
  const double h = config.altitude_m;
  if (d <= h) return 0.0;
  // (d - h)(d + h) keeps precision for d close to h.
  return std::sqrt((d - h) * (d + h));
}

double serving_offset_pdf(const NetworkConfig& config, double x) {
  const double R = config.radius_m;
  if (x < 0 || x > R) return 0.0;
  return config.n_uavs / R * std::pow(1.0 - x / R, config.n_uavs - 1);
}

double serving_pdf(const NetworkConfig& config, double r) {
  const DistanceSupport s = link_support(config);
  if (r < s.lower_m || r > s.upper_m) return 0.0;
  const double x = horizontal_offset(config, r);
  if (x == 0.0) return kInf;
  return serving_offset_pdf(config, x) * r / x;
}

double serving_cdf(const NetworkConfig& config, double r) {
  const DistanceSupport s = link_support(config);
  if (r <= s.lower_m) return 0.0;
  if (r >= s.upper_m) return 1.0;
  const double x = horizontal_offset(config, r);
  return 1.0 - std::pow(1.0 - x / config.radius_m, config.n_uavs);
}

double link_cdf(const NetworkConfig& config, double d) {
  const DistanceSupport s = link_support(config);
  if (d <= s.lower_m) return 0.0;
  if (d >= s.upper_m) return 1.0;
  return horizontal_offset(config, d) / config.radius_m;
}

double link_pdf(const NetworkConfig& config, double d) {
  const DistanceSupport s = link_support(config);
  if (d < s.lower_m || d > s.upper_m) return 0.0;
  const double x = horizontal_offset(config, d);
  if (x == 0.0) return kInf;
  return d / (config.radius_m * x);
}

double interferer_pdf_given_r(const NetworkConfig& config, double r, double v) {
  const DistanceSupport s = interferer_support(config, r);
  if (v < s.lower_m || v > s.upper_m) return 0.0;
  return link_pdf(config, v) / (1.0 - link_cdf(config, r));
}

double interferer_cdf_given_r(const NetworkConfig& config, double r, double v) {
  const DistanceSupport s = interferer_support(config, r);
  if (v <= s.lower_m) return 0.0;
  if (v >= s.upper_m) return 1.0;
  const double xr = horizontal_offset(config, r);
  return (horizontal_offset(config, v) - xr) / (config.radius_m - xr);
}

double interferer_quantile_given_r(const NetworkConfig& config, double r, double u) {
  const DistanceSupport s = interferer_support(config, r);
  if (u <= 0) return s.lower_m;
  if (u >= 1) return s.upper_m;
  const double xr = horizontal_offset(config, r);
  const double x = xr + u * (config.radius_m - xr);
  return std::hypot(config.altitude_m, x);
}

NetworkRealization sample_corridor(const NetworkConfig& config, Rng& rng) {
  const int n = config.n_uavs;
  std::uniform_real_distribution<double> offset(-config.radius_m, config.radius_m);
  NetworkRealization net;
  net.offsets.resize(n);
  net.link_distances.resize(n);
  for (int i = 0; i < n; ++i) {
    net.offsets[i] = offset(rng);
    net.link_distances[i] = std::hypot(config.altitude_m, net.offsets[i]);
  }
  net.ordered_distances = net.link_distances;
  std::sort(net.ordered_distances.begin(), net.ordered_distances.end());
  net.serving_index = static_cast<int>(
      std::min_element(net.link_distances.begin(), net.link_distances.end()) -
      net.link_distances.begin());
  return net;
}

}  // namespace uavcov
