#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace uavcov {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

using Rng = std::mt19937_64;

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

/// Scenario for one typical ground receiver under a straight UAV corridor.
///
/// Units: meters, Hz, watts, seconds, joules; the SINR threshold is linear.
/// The corridor spans horizontal offsets [-R, R] at altitude h and the
/// receiver sits at the ground origin below its midpoint.
struct NetworkConfig {
  int n_uavs = 10;
  double altitude_m = 100.0;
  double radius_m = 200.0;
  double alpha = 2.2;
  double carrier_hz = 3.5e9;
  int nakagami_m = 2;
  /// Fading shape used for interfering links; 0 means "same as nakagami_m".
  int interferer_m = 0;
  double shadow_q = 3.0;
  /// Inverse-gamma scale; the default q - 1 gives unit-mean shadowing.
  double shadow_gamma = 2.0;
  double tx_power_w = 1.5848931924611136;  // 32 dBm
  double rf_dc_eff = 0.5;
  double slot_s = 1.0;
  double tau = 0.25;
  double noise_w = 3.9810717055349565e-15;  // -114 dBm
  double energy_threshold_j = 1.2154223614684031e-09;  // calibrated: exact P_h = 0.8
  double sinr_threshold = 0.11587030881210304;        // calibrated: P_c = 0.6

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;

  /// K = (c / (4 pi f_c))^2.
  double path_loss_constant() const;
  /// sqrt(h^2 + R^2), the farthest possible link.
  double max_distance() const;
  int interference_m() const { return interferer_m > 0 ? interferer_m : nakagami_m; }
  /// p * eta * tau * T: joules harvested per unit of (fading * shadowing * path loss).
  double harvest_scale() const { return tx_power_w * rf_dc_eff * tau * slot_s; }
  double shadow_mean() const { return shadow_gamma / (shadow_q - 1.0); }

  bool operator==(const NetworkConfig&) const = default;
};

/// Power-law path loss K * d^-alpha. Throws std::domain_error for d <= 0.
double path_loss(const NetworkConfig& config, double distance_m);

/// Gamma(m, 1/m) density of the Nakagami-m power gain.
double gamma_fading_pdf(int m, double x);

/// Inverse-gamma density with shape q and scale gamma.
double inv_gamma_pdf(double q, double gamma_scale, double x);

/// inv_gamma_pdf with the normalizer precomputed, for inner integration loops.
class InvGammaDensity {
 public:
  InvGammaDensity(double q, double gamma_scale);
  /// Zero for x <= 0.
  double operator()(double x) const {
    if (!(x > 0)) return 0.0;
    return std::exp(log_norm_ - (q_ + 1.0) * std::log(x) - gamma_scale_ / x);
  }

 private:
  double q_;
  double gamma_scale_;
  double log_norm_;
};

enum class Phase { Harvest, Comm };

struct ChannelDraw {
  double fading_gain;
  double shadow_factor;
  Phase phase;
};

/// Samplers hold distribution state, so each worker owns its own instance.
class FadingSampler {
 public:
  explicit FadingSampler(int m);
  double operator()(Rng& rng);

 private:
  int m_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

class ShadowSampler {
 public:
  ShadowSampler(double q, double gamma_scale);
  /// gamma / G with G ~ Gamma(q, 1).
  double operator()(Rng& rng) { return gamma_scale_ / gamma_(rng); }

 private:
  double gamma_scale_;
  std::gamma_distribution<double> gamma_;
};

double sample_fading(int m, Rng& rng);
double sample_shadow(double q, double gamma_scale, Rng& rng);

ChannelDraw sample_channel(const NetworkConfig& config, Phase phase, Rng& rng);

}  // namespace uavcov
