#pragma once

// Per-slot sampling kernel shared by the serial and OpenMP drivers.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <limits>
#include <optional>
#include <vector>

#include "uavcov/geometry.hpp"
#include "uavcov/model.hpp"
#include "uavcov/montecarlo.hpp"

namespace uavcov::detail {

struct SlotDraw {
  double received_w;  // sum_i p h_i S_i l(d_i) during the charging sub-slot (watts)
  double sinr;
};

// Draw order per slot: N corridor positions, then (fading, shadowing) per UAV
// for the charging sub-slot, then (fading, shadowing) per UAV for the
// communication sub-slot. The order never depends on p, tau or thresholds.
class SlotSampler {
 public:
  SlotSampler(const NetworkConfig& config, std::optional<double> r_pin)
      : c_(config),
        k_(config.path_loss_constant()),
        r_pin_(r_pin),
        serving_fading_(config.nakagami_m),
        interferer_fading_(config.interference_m()),
        shadow_(config.shadow_q, config.shadow_gamma),
        offset_(-config.radius_m, config.radius_m),
        gain_(static_cast<std::size_t>(config.n_uavs)) {
    if (r_pin_) pinned_offset_ = horizontal_offset(config, *r_pin_);
  }

  SlotDraw operator()(Rng& rng) {
    const int n = c_.n_uavs;
    const double h2 = c_.altitude_m * c_.altitude_m;
    int serving = 0;
    if (r_pin_) {
      // Serving node first, the rest uniform in offset on [x_r, R].
      gain_[0] = k_ * std::pow(*r_pin_, -c_.alpha);
      for (int i = 1; i < n; ++i) {
        const double x = pinned_offset_ + unit_(rng) * (c_.radius_m - pinned_offset_);
        gain_[i] = k_ * std::pow(h2 + x * x, -0.5 * c_.alpha);
      }
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        const double u = offset_(rng);
        const double d2 = h2 + u * u;
        gain_[i] = k_ * std::pow(d2, -0.5 * c_.alpha);
        if (d2 < best) {
          best = d2;
          serving = i;
        }
      }
    }

    double received = 0.0;
    for (int i = 0; i < n; ++i) {
      const double h = serving_fading_(rng);
      const double s = shadow_(rng);
      received += c_.tx_power_w * h * s * gain_[i];
    }

    double signal = 0.0;
    double interference = 0.0;
    for (int i = 0; i < n; ++i) {
      const bool is_serving = i == serving;
      const double h = is_serving ? serving_fading_(rng) : interferer_fading_(rng);
      const double s = shadow_(rng);
      const double power = c_.tx_power_w * h * s * gain_[i];
      (is_serving ? signal : interference) += power;
    }
    const double denom = interference + c_.noise_w;
    const double sinr = denom > 0 ? signal / denom : std::numeric_limits<double>::infinity();
    return {received, sinr};
  }

 private:
  const NetworkConfig& c_;
  double k_;
  std::optional<double> r_pin_;
  double pinned_offset_ = 0.0;
  FadingSampler serving_fading_;
  FadingSampler interferer_fading_;
  ShadowSampler shadow_;
  std::uniform_real_distribution<double> offset_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::vector<double> gain_;
};

struct ChunkCounts {
  std::vector<long> energy;  // per tau
  std::vector<long> joint;   // per tau
  long comm = 0;
};

/// Joules per watt received: eta * tau * T.
inline double energy_per_watt(const NetworkConfig& c) { return c.rf_dc_eff * c.tau * c.slot_s; }

inline long chunk_count(long n_slots) { return (n_slots + kSlotsPerChunk - 1) / kSlotsPerChunk; }

inline ChunkCounts run_chunk(const NetworkConfig& config, std::optional<double> r_pin,
                             const std::vector<double>& harvest_scales, long n_slots,
                             std::uint64_t seed, long chunk) {
  const long begin = chunk * kSlotsPerChunk;
  const long end = std::min(n_slots, begin + kSlotsPerChunk);
  Rng rng = chunk_rng(seed, chunk);
  SlotSampler sampler(config, r_pin);
  ChunkCounts counts{std::vector<long>(harvest_scales.size(), 0),
                     std::vector<long>(harvest_scales.size(), 0), 0};
  for (long slot = begin; slot < end; ++slot) {
    const SlotDraw d = sampler(rng);
    const bool comm = d.sinr >= config.sinr_threshold;
    counts.comm += comm;
    for (std::size_t t = 0; t < harvest_scales.size(); ++t) {
      const bool energy = harvest_scales[t] * d.received_w >= config.energy_threshold_j;
      counts.energy[t] += energy;
      counts.joint[t] += energy && comm;
    }
  }
  return counts;
}

inline McEstimate make_estimate(long energy, long comm, long joint, long n_slots,
                                std::uint64_t seed) {
  McEstimate e;
  e.n_slots = n_slots;
  e.seed = seed;
  e.p_h = static_cast<double>(energy) / n_slots;
  e.p_c = static_cast<double>(comm) / n_slots;
  e.p_jc = static_cast<double>(joint) / n_slots;
  e.halfwidth_h = halfwidth95(e.p_h, n_slots);
  e.halfwidth_c = halfwidth95(e.p_c, n_slots);
  e.halfwidth_jc = halfwidth95(e.p_jc, n_slots);
  return e;
}

inline std::vector<McEstimate> reduce(const std::vector<ChunkCounts>& chunks, std::size_t n_taus,
                                      long n_slots, std::uint64_t seed) {
  std::vector<long> energy(n_taus, 0);
  std::vector<long> joint(n_taus, 0);
  long comm = 0;
  for (const ChunkCounts& c : chunks) {
    comm += c.comm;
    for (std::size_t t = 0; t < n_taus; ++t) {
      energy[t] += c.energy[t];
      joint[t] += c.joint[t];
    }
  }
  std::vector<McEstimate> out;
  for (std::size_t t = 0; t < n_taus; ++t)
    out.push_back(make_estimate(energy[t], comm, joint[t], n_slots, seed));
  return out;
}

inline void check_run(const NetworkConfig& config, long n_slots) {
  config.validate();
  if (n_slots < 1) throw std::invalid_argument("n_slots must be >= 1");
}

inline void check_pin(const NetworkConfig& config, double r_pin) {
  if (!(r_pin >= config.altitude_m && r_pin < config.max_distance()))
    throw std::domain_error("r_pin outside the serving-distance support");
}

}  // namespace uavcov::detail
