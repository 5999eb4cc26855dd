#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include <omp.h>

#include "oracles.hpp"
#include "uavcov/analysis.hpp"
#include "uavcov/geometry.hpp"
#include "uavcov/montecarlo.hpp"

using namespace uavcov;
using doctest::Approx;

namespace {

bool same(const McEstimate& a, const McEstimate& b) {
  return a.p_h == b.p_h && a.p_c == b.p_c && a.p_jc == b.p_jc && a.n_slots == b.n_slots &&
         a.halfwidth_h == b.halfwidth_h && a.halfwidth_c == b.halfwidth_c &&
         a.halfwidth_jc == b.halfwidth_jc;
}

}  // namespace

TEST_SUITE("montecarlo") {
  TEST_CASE("halfwidth formula") {
    CHECK(halfwidth95(0.5, 10000) == Approx(1.96 * 0.005));
    CHECK(halfwidth95(0.0, 100) == 0.0);
  }

  TEST_CASE("degenerate thresholds") {
    NetworkConfig c;
    c.tau = 0;
    c.energy_threshold_j = 1e-12;
    CHECK(simulate(c, 50000, 1).p_h == 0.0);
    c = {};
    c.energy_threshold_j = 0;
    c.sinr_threshold = 1e-300;
    const McEstimate e = simulate(c, 50000, 1);
    CHECK(e.p_h == 1.0);
    CHECK(e.p_c == 1.0);
    CHECK(e.p_jc == 1.0);
  }

  TEST_CASE("serial and parallel drivers are bit-identical") {
    NetworkConfig c;
    const long n = 3 * kSlotsPerChunk + 123;
    const McEstimate serial = simulate_serial(c, n, 42);
    for (int threads : {1, 2, 4}) {
      omp_set_num_threads(threads);
      CHECK(same(simulate(c, n, 42), serial));
    }
    const double r = 1.3 * c.altitude_m;
    CHECK(same(simulate_conditioned(c, r, n, 9), simulate_conditioned_serial(c, r, n, 9)));
    CHECK_FALSE(same(simulate(c, n, 43), serial));
  }

  TEST_CASE("tau family reuses the same draws") {
    NetworkConfig c;
    const std::vector<double> taus{0.1, 0.25, 0.4};
    const std::vector<McEstimate> fam = simulate_tau_family(c, taus, 20000, 5);
    REQUIRE(fam.size() == 3u);
    for (std::size_t i = 0; i < taus.size(); ++i) {
      c.tau = taus[i];
      CHECK(same(fam[i], simulate(c, 20000, 5)));
    }
    CHECK(fam[0].p_h <= fam[1].p_h);
    CHECK(fam[1].p_h <= fam[2].p_h);
  }

  TEST_CASE("joint never exceeds either marginal") {
    NetworkConfig c;
    for (double tau : {0.05, 0.25, 0.5}) {
      c.tau = tau;
      const McEstimate e = simulate(c, 100000, 3);
      CHECK(e.p_jc <= std::min(e.p_h, e.p_c));
    }
  }

  TEST_CASE("harvested energy samples") {
    NetworkConfig c;
    const std::vector<double> e = sample_harvest_distribution(c, 1'000'000, 11);
    CHECK(std::all_of(e.begin(), e.end(), [](double x) { return x > 0; }));
    CHECK(oracle::mean(e) == Approx(mean_harvested_energy(c)).epsilon(0.01));
    NetworkConfig doubled = c;
    doubled.tx_power_w *= 2;
    const std::vector<double> e2 = sample_harvest_distribution(doubled, 1000, 11);
    for (std::size_t i = 0; i < e2.size(); ++i) CHECK(e2[i] == Approx(2 * e[i]).epsilon(1e-14));
  }

  TEST_CASE("conditioned runs") {
    NetworkConfig c;
    CHECK_THROWS_AS(simulate_conditioned(c, 50.0, 10, 1), std::domain_error);
    CHECK_THROWS_AS(simulate_conditioned(c, 1e4, 10, 1), std::domain_error);
    c.energy_threshold_j = 0;
    CHECK(simulate_conditioned(c, 130.0, 10000, 1).p_h == 1.0);

    // N = 1: SINR is p h S l(r) / noise. Check against the exact law
    // P(h S >= g) with h ~ Gamma(m, 1/m), S inverse-gamma.
    c = {};
    c.n_uavs = 1;
    const double r = 150.0;
    const double a = c.tx_power_w * path_loss(c, r) / c.noise_w;
    c.sinr_threshold = 0.5 * a;
    const McEstimate mc = simulate_conditioned(c, r, 400000, 2);
    const double exact = oracle::simpson(
        [&](double g) {
          if (g <= 0) return 0.0;
          const double s = c.shadow_gamma / g;
          const double dens = std::exp(2 * std::log(g) - g - std::lgamma(3.0));
          return dens * oracle::q_integer(2, 2 * 0.5 / s);
        },
        0.0, 60.0, 20000);
    CHECK(std::abs(mc.p_c - exact) <= 3 * mc.halfwidth_c);
  }

  TEST_CASE("empirical serving distance follows its law") {
    const NetworkConfig c;
    Rng rng(1234);
    std::vector<double> r;
    for (int i = 0; i < 1'000'000; ++i) r.push_back(sample_corridor(c, rng).serving_distance());
    CHECK(oracle::ks_statistic(r, [&](double x) { return serving_cdf(c, x); }) <
          oracle::ks_critical_001(r.size()));
  }

  TEST_CASE("per-slot dump") {
    const NetworkConfig c;
    const std::vector<SlotOutcome> slots = simulate_slots(c, 5000, 8);
    long energy = 0, comm = 0, joint = 0;
    for (const SlotOutcome& s : slots) {
      CHECK(s.joint_covered == (s.energy_covered && s.comm_covered));
      energy += s.energy_covered;
      comm += s.comm_covered;
      joint += s.joint_covered;
    }
    const McEstimate e = simulate(c, 5000, 8);
    CHECK(e.p_h == Approx(energy / 5000.0));
    CHECK(e.p_c == Approx(comm / 5000.0));
    CHECK(e.p_jc == Approx(joint / 5000.0));
    std::ostringstream a, b;
    write_slots_csv(a, slots);
    write_slots_csv(b, simulate_slots(c, 5000, 8));
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("slot,harvested_j,sinr,energy_covered,comm_covered,joint_covered\n", 0) == 0);
  }
}
