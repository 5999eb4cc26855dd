#include "uavcov/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace uavcov {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw std::invalid_argument(std::string(field) + ": " + what);
}

}  // namespace

void NetworkConfig::validate() const {
  require(n_uavs >= 1, "n_uavs", "must be >= 1");
  require(std::isfinite(altitude_m) && altitude_m > 0, "altitude_m", "must be > 0");
  require(std::isfinite(radius_m) && radius_m > 0, "radius_m", "must be > 0");
  require(std::isfinite(alpha) && alpha > 0, "alpha", "must be > 0");
  require(std::isfinite(carrier_hz) && carrier_hz > 0, "carrier_hz", "must be > 0");
  require(nakagami_m >= 1, "nakagami_m", "must be an integer >= 1");
  require(interferer_m >= 0, "interferer_m", "must be >= 0 (0 = same as nakagami_m)");
  require(std::isfinite(shadow_q) && shadow_q > 1, "shadow_q", "must be > 1");
  require(std::isfinite(shadow_gamma) && shadow_gamma > 0, "shadow_gamma", "must be > 0");
  require(std::isfinite(tx_power_w) && tx_power_w > 0, "tx_power_w", "must be > 0");
  require(rf_dc_eff > 0 && rf_dc_eff < 1, "rf_dc_eff", "must lie in (0, 1)");
  require(std::isfinite(slot_s) && slot_s > 0, "slot_s", "must be > 0");
  require(tau >= 0 && tau <= 1, "tau", "must lie in [0, 1]");
  require(std::isfinite(noise_w) && noise_w >= 0, "noise_w", "must be >= 0");
  require(std::isfinite(energy_threshold_j) && energy_threshold_j >= 0, "energy_threshold_j",
          "must be >= 0");
  require(std::isfinite(sinr_threshold) && sinr_threshold > 0, "sinr_threshold", "must be > 0");
}

double NetworkConfig::path_loss_constant() const {
  const double k = kSpeedOfLight / (4.0 * kPi * carrier_hz);
  return k * k;
}

double NetworkConfig::max_distance() const { return std::hypot(altitude_m, radius_m); }

double path_loss(const NetworkConfig& config, double distance_m) {
  if (!(distance_m > 0)) throw std::domain_error("path_loss: distance must be > 0");
  return config.path_loss_constant() * std::pow(distance_m, -config.alpha);
}

double gamma_fading_pdf(int m, double x) {
  if (m < 1) throw std::domain_error("gamma_fading_pdf: m must be >= 1");
  if (!(x > 0)) throw std::domain_error("gamma_fading_pdf: x must be > 0");
  const double md = m;
  return std::exp(md * std::log(md) + (md - 1) * std::log(x) - md * x - std::lgamma(md));
}

double inv_gamma_pdf(double q, double gamma_scale, double x) {
  if (!(q > 0) || !(gamma_scale > 0)) throw std::domain_error("inv_gamma_pdf: bad parameters");
  if (!(x > 0)) throw std::domain_error("inv_gamma_pdf: x must be > 0");
  return std::exp(q * std::log(gamma_scale) - std::lgamma(q) - (q + 1) * std::log(x) -
                  gamma_scale / x);
}

InvGammaDensity::InvGammaDensity(double q, double gamma_scale)
    : q_(q), gamma_scale_(gamma_scale), log_norm_(q * std::log(gamma_scale) - std::lgamma(q)) {
  if (!(q > 0) || !(gamma_scale > 0)) throw std::domain_error("InvGammaDensity: bad parameters");
}

FadingSampler::FadingSampler(int m) : m_(m) {
  if (m < 1) throw std::domain_error("FadingSampler: m must be >= 1");
}

// Integer shape: sum of m unit exponentials, scaled by 1/m.
double FadingSampler::operator()(Rng& rng) {
  double log_sum = 0.0;
  for (int i = 0; i < m_; ++i) log_sum += std::log1p(-unit_(rng));
  return -log_sum / m_;
}

ShadowSampler::ShadowSampler(double q, double gamma_scale)
    : gamma_scale_(gamma_scale), gamma_(q, 1.0) {
  if (!(q > 0) || !(gamma_scale > 0)) throw std::domain_error("ShadowSampler: bad parameters");
}

double sample_fading(int m, Rng& rng) { return FadingSampler(m)(rng); }

double sample_shadow(double q, double gamma_scale, Rng& rng) {
  return ShadowSampler(q, gamma_scale)(rng);
}

ChannelDraw sample_channel(const NetworkConfig& config, Phase phase, Rng& rng) {
  const double h = sample_fading(config.nakagami_m, rng);
  const double s = sample_shadow(config.shadow_q, config.shadow_gamma, rng);
  return {h, s, phase};
}

}  // namespace uavcov
