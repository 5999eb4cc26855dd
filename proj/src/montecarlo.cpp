#include "uavcov/montecarlo.hpp"

#include <ostream>

#include "montecarlo_kernel.hpp"
#include "uavcov/util/format.hpp"

namespace uavcov {

namespace {

std::vector<McEstimate> parallel_run(const NetworkConfig& config, std::optional<double> r_pin,
                                     const std::vector<double>& harvest_scales, long n_slots,
                                     std::uint64_t seed) {
  const long n_chunks = detail::chunk_count(n_slots);
  std::vector<detail::ChunkCounts> chunks(static_cast<std::size_t>(n_chunks));
#pragma omp parallel for schedule(dynamic, 1)
  for (long c = 0; c < n_chunks; ++c)
    chunks[c] = detail::run_chunk(config, r_pin, harvest_scales, n_slots, seed, c);
  return detail::reduce(chunks, harvest_scales.size(), n_slots, seed);
}

// Calls visit(slot, draw) for every slot; chunks run in parallel.
template <class Visit>
void for_each_slot(const NetworkConfig& config, std::optional<double> r_pin, long n_slots,
                   std::uint64_t seed, Visit&& visit) {
  const long n_chunks = detail::chunk_count(n_slots);
#pragma omp parallel for schedule(dynamic, 1)
  for (long c = 0; c < n_chunks; ++c) {
    Rng rng = chunk_rng(seed, c);
    detail::SlotSampler sampler(config, r_pin);
    const long end = std::min(n_slots, (c + 1) * kSlotsPerChunk);
    for (long slot = c * kSlotsPerChunk; slot < end; ++slot) visit(slot, sampler(rng));
  }
}

}  // namespace

McEstimate simulate(const NetworkConfig& config, long n_slots, std::uint64_t seed) {
  detail::check_run(config, n_slots);
  return parallel_run(config, std::nullopt, {detail::energy_per_watt(config)}, n_slots, seed).front();
}

std::vector<McEstimate> simulate_tau_family(const NetworkConfig& config,
                                            const std::vector<double>& taus, long n_slots,
                                            std::uint64_t seed) {
  detail::check_run(config, n_slots);
  std::vector<double> scales;
  for (double tau : taus) {
    NetworkConfig c = config;
    c.tau = tau;
    c.validate();
    scales.push_back(detail::energy_per_watt(c));
  }
  return parallel_run(config, std::nullopt, scales, n_slots, seed);
}

McEstimate simulate_conditioned(const NetworkConfig& config, double r_pin, long n_slots,
                                std::uint64_t seed) {
  detail::check_run(config, n_slots);
  detail::check_pin(config, r_pin);
  return parallel_run(config, r_pin, {detail::energy_per_watt(config)}, n_slots, seed).front();
}

std::vector<double> sample_harvest_distribution(const NetworkConfig& config, long n_slots,
                                                std::uint64_t seed) {
  detail::check_run(config, n_slots);
  std::vector<double> out(static_cast<std::size_t>(n_slots));
  const double scale = detail::energy_per_watt(config);
  for_each_slot(config, std::nullopt, n_slots, seed,
                [&](long slot, const detail::SlotDraw& d) { out[slot] = scale * d.received_w; });
  return out;
}

std::vector<double> sample_conditioned_harvest(const NetworkConfig& config, double r_pin,
                                               long n_slots, std::uint64_t seed) {
  detail::check_run(config, n_slots);
  detail::check_pin(config, r_pin);
  std::vector<double> out(static_cast<std::size_t>(n_slots));
  const double scale = detail::energy_per_watt(config);
  for_each_slot(config, r_pin, n_slots, seed,
                [&](long slot, const detail::SlotDraw& d) { out[slot] = scale * d.received_w; });
  return out;
}

std::vector<SlotOutcome> simulate_slots(const NetworkConfig& config, long n_slots,
                                        std::uint64_t seed) {
  detail::check_run(config, n_slots);
  std::vector<SlotOutcome> out(static_cast<std::size_t>(n_slots));
  const double scale = detail::energy_per_watt(config);
  for_each_slot(config, std::nullopt, n_slots, seed, [&](long slot, const detail::SlotDraw& d) {
    SlotOutcome& o = out[slot];
    o.harvested_j = scale * d.received_w;
    o.sinr = d.sinr;
    o.energy_covered = o.harvested_j >= config.energy_threshold_j;
    o.comm_covered = o.sinr >= config.sinr_threshold;
    o.joint_covered = o.energy_covered && o.comm_covered;
  });
  return out;
}

void write_slots_csv(std::ostream& os, const std::vector<SlotOutcome>& slots) {
  os << "slot,harvested_j,sinr,energy_covered,comm_covered,joint_covered\n";
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const SlotOutcome& s = slots[i];
    os << i << ',' << util::format_number(s.harvested_j) << ',' << util::format_number(s.sinr)
       << ',' << s.energy_covered << ',' << s.comm_covered << ',' << s.joint_covered << '\n';
  }
}

}  // namespace uavcov
