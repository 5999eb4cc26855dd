// Single-threaded reference drivers. Kept deliberately plain: the OpenMP
// drivers in montecarlo.cpp must reproduce these results bit for bit.

#include <cmath>

#include "montecarlo_kernel.hpp"

namespace uavcov {

double halfwidth95(double p, long n) {
  if (n <= 0) return 0.0;
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

Rng chunk_rng(std::uint64_t seed, long chunk) {
  const auto c = static_cast<std::uint64_t>(chunk);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
  return Rng(seq);
}

namespace {

McEstimate serial_run(const NetworkConfig& config, std::optional<double> r_pin, long n_slots,
                      std::uint64_t seed) {
  const std::vector<double> scales{detail::energy_per_watt(config)};
  std::vector<detail::ChunkCounts> chunks;
  for (long c = 0; c < detail::chunk_count(n_slots); ++c)
    chunks.push_back(detail::run_chunk(config, r_pin, scales, n_slots, seed, c));
  return detail::reduce(chunks, 1, n_slots, seed).front();
}

}  // namespace

McEstimate simulate_serial(const NetworkConfig& config, long n_slots, std::uint64_t seed) {
  detail::check_run(config, n_slots);
  return serial_run(config, std::nullopt, n_slots, seed);
}

McEstimate simulate_conditioned_serial(const NetworkConfig& config, double r_pin, long n_slots,
                                       std::uint64_t seed) {
  detail::check_run(config, n_slots);
  detail::check_pin(config, r_pin);
  return serial_run(config, r_pin, n_slots, seed);
}

}  // namespace uavcov
