#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "uavcov/geometry.hpp"
#include "uavcov/model.hpp"

namespace uavcov {

struct SlotOutcome {
  double harvested_j;
  double sinr;
  bool energy_covered;
  bool comm_covered;
  bool joint_covered;
};

struct McEstimate {
  double p_h = 0.0;
  double p_c = 0.0;
  double p_jc = 0.0;
  double halfwidth_h = 0.0;  // 95% normal-approximation half-widths
  double halfwidth_c = 0.0;
  double halfwidth_jc = 0.0;
  long n_slots = 0;
  std::uint64_t seed = 0;
};

/// 1.96 sqrt(p (1 - p) / n).
double halfwidth95(double p, long n);

// Slots are processed in fixed chunks of kSlotsPerChunk; chunk c draws from
// its own generator seeded by (seed, c). Results depend only on
// (config, n_slots, seed), never on the number of worker threads.
inline constexpr long kSlotsPerChunk = 4096;

Rng chunk_rng(std::uint64_t seed, long chunk);

/// OpenMP driver.
McEstimate simulate(const NetworkConfig& config, long n_slots, std::uint64_t seed);
/// Single-threaded reference; bit-identical to simulate().
McEstimate simulate_serial(const NetworkConfig& config, long n_slots, std::uint64_t seed);

/// One set of draws judged at every harvesting fraction in `taus` (common
/// random numbers; E_h is linear in tau). Entry i uses taus[i].
std::vector<McEstimate> simulate_tau_family(const NetworkConfig& config,
                                            const std::vector<double>& taus, long n_slots,
                                            std::uint64_t seed);

/// Serving UAV pinned at distance r_pin; the other N - 1 distances are drawn
/// from the truncated link law on [r_pin, sqrt(h^2+R^2)].
McEstimate simulate_conditioned(const NetworkConfig& config, double r_pin, long n_slots,
                                std::uint64_t seed);
McEstimate simulate_conditioned_serial(const NetworkConfig& config, double r_pin, long n_slots,
                                       std::uint64_t seed);

std::vector<double> sample_harvest_distribution(const NetworkConfig& config, long n_slots,
                                                std::uint64_t seed);
/// Harvested energy with the serving distance pinned at r_pin.
std::vector<double> sample_conditioned_harvest(const NetworkConfig& config, double r_pin,
                                               long n_slots, std::uint64_t seed);

std::vector<SlotOutcome> simulate_slots(const NetworkConfig& config, long n_slots,
                                        std::uint64_t seed);

/// Header "slot,harvested_j,sinr,energy_covered,comm_covered,joint_covered".
void write_slots_csv(std::ostream& os, const std::vector<SlotOutcome>& slots);

}  // namespace uavcov
