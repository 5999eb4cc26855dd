#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "uavcov/analysis.hpp"
#include "uavcov/geometry.hpp"
#include "uavcov/montecarlo.hpp"

using namespace uavcov;
using doctest::Approx;
using cplx = std::complex<double>;

namespace {

constexpr long kSlots = 1'000'000;

bool within_3_halfwidths(double analytic, double p_mc, double halfwidth) {
  return std::abs(analytic - p_mc) <= 3.0 * halfwidth;
}

double direct_interference_laplace(const NetworkConfig& c, double r, double s,
                                   int x_panels = 400, int g_panels = 6000) {
  return oracle::interference_laplace({c.n_uavs, c.altitude_m, c.radius_m, c.alpha,
                                       c.path_loss_constant(), c.tx_power_w, c.interference_m(),
                                       c.shadow_q, c.shadow_gamma},
                                      r, s, x_panels, g_panels);
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("energy Laplace transform identities") {
    NetworkConfig c;
    CHECK(energy_laplace(c, 0.0) == cplx(1.0, 0.0));
    c.n_uavs = 5;
    const cplx s(2e9, 1e9);
    const cplx l5 = energy_laplace(c, s);
    c.n_uavs = 10;
    const cplx l10 = energy_laplace(c, s);
    CHECK(std::abs(l10 - l5 * l5) < 1e-10);
  }

  TEST_CASE("energy Laplace transform against simulated slots") {
    const NetworkConfig c;
    const std::vector<double> e = sample_harvest_distribution(c, kSlots, 31);
    std::vector<double> w(e.size());
    const double s = 1e10;
    std::transform(e.begin(), e.end(), w.begin(), [s](double x) { return std::exp(-s * x); });
    const double se = std::sqrt(oracle::variance(w) / w.size());
    CHECK(std::abs(energy_laplace(c, s).real() - oracle::mean(w)) <= 3 * se);
  }

  TEST_CASE("exact energy coverage limits") {
    NetworkConfig c;
    c.energy_threshold_j = 0;
    CHECK(energy_coverage_exact(c).value == 1.0);
    c.energy_threshold_j = 1e-9;
    c.tau = 0;
    CHECK(energy_coverage_exact(c).value == 0.0);
  }

  TEST_CASE("exact energy coverage at the simulated median") {
    NetworkConfig c;
    c.energy_threshold_j = oracle::quantile(sample_harvest_distribution(c, kSlots, 3), 0.5);
    const CoverageResult r = energy_coverage_exact(c);
    CHECK(r.method == CoverageMethod::ExactLaplace);
    CHECK(std::abs(r.value - 0.5) <= 0.01);
  }

  TEST_CASE("Talbot and Euler agree on the energy cdf") {
    NetworkConfig c;
    const double mean = mean_harvested_energy(c);
    AnalysisOptions euler;
    euler.inversion.method = numerics::InversionMethod::EulerSummation;
    for (double f : {0.3, 0.5, 0.8, 1.0, 1.5, 2.0, 3.0}) {
      c.energy_threshold_j = f * mean;
      CHECK(std::abs(energy_coverage_exact(c).value - energy_coverage_exact(c, euler).value) <= 1e-4);
    }
  }

  TEST_CASE("exact energy coverage grows with tau, N and p") {
    NetworkConfig c;
    double prev = -1;
    for (double tau = 0.05; tau <= 0.5001; tau += 0.05) {
      c.tau = tau;
      const double v = energy_coverage_exact(c).value;
      CHECK(v >= prev - 1e-6);
      prev = v;
    }
    c = {};
    prev = -1;
    for (int n = 1; n <= 20; ++n) {
      c.n_uavs = n;
      const double v = energy_coverage_exact(c).value;
      CHECK(v >= prev - 1e-6);
      prev = v;
    }
    c = {};
    prev = -1;
    for (double dbm = 20; dbm <= 40; dbm += 2) {
      c.tx_power_w = dbm_to_watt(dbm);
      const double v = energy_coverage_exact(c).value;
      CHECK(v >= prev - 1e-6);
      prev = v;
    }
  }

  TEST_CASE("moment matching") {
    NetworkConfig c;
    const double r = 1.1 * c.altitude_m;
    const MomParams mp = mom_params(c, r);
    CHECK(mp.k_mom * mp.theta_mom == Approx(mp.cond_mean).epsilon(1e-10));
    // Gamma(k, theta) second moment k theta^2 (k + 1)
    CHECK(mp.k_mom * mp.theta_mom * mp.theta_mom * (mp.k_mom + 1) ==
          Approx(mp.cond_second_moment).epsilon(1e-10));
    CHECK(mp.variance() > 0);

    for (int n : {2, 3, 4}) {
      CAPTURE(n);
      c.n_uavs = n;
      const NodeHarvestMoments node = node_harvest_moments(c, r);
      const MomParams p = mom_params(c, r);
      CHECK(p.cond_second_moment ==
            Approx(oracle::multinomial_second_moment(n - 1, node.mean, node.second_moment)).epsilon(1e-10));
      if (n == 2) CHECK(p.cond_second_moment == Approx(node.second_moment).epsilon(1e-14));
    }

    c.n_uavs = 1;
    CHECK_THROWS_AS(mom_params(c, r), DegenerateModelError);
    c = {};
    c.shadow_q = 2.0;
    c.shadow_gamma = 1.0;
    CHECK_THROWS_AS(mom_params(c, r), DegenerateModelError);
  }

  TEST_CASE("moment matching against conditioned simulation") {
    const NetworkConfig c;
    const double r = 1.1 * c.altitude_m;
    const MomParams mp = mom_params(c, r);
    // The simulation includes the serving UAV; add its exact moments.
    const double a = c.harvest_scale() * path_loss(c, r);
    const double m = c.nakagami_m;
    const double s2 = c.shadow_gamma * c.shadow_gamma / ((c.shadow_q - 1) * (c.shadow_q - 2));
    const double serving_mean = a * c.shadow_mean();
    const double serving_var = a * a * (m + 1) / m * s2 - serving_mean * serving_mean;
    const std::vector<double> e = sample_conditioned_harvest(c, r, kSlots, 41);
    CHECK(oracle::mean(e) == Approx(mp.cond_mean + serving_mean).epsilon(0.01));
    CHECK(oracle::variance(e) == Approx(mp.variance() + serving_var).epsilon(0.01));
  }

  TEST_CASE("conditional energy coverage") {
    NetworkConfig c;
    const double r = 1.2 * c.altitude_m;
    c.energy_threshold_j = 0;
    CHECK(cond_energy_coverage(c, r) == 1.0);
    double prev = 1.0;
    for (double g = 1e-10; g < 1e-6; g *= 2) {
      c.energy_threshold_j = g;
      const double v = cond_energy_coverage(c, r);
      CHECK(v <= prev + 1e-9);
      prev = v;
    }
    CHECK(prev < 1e-3);
    c.n_uavs = 1;
    c.energy_threshold_j = 2e-10;
    const double single = cond_energy_coverage(c, r);
    CHECK(single > 0);
    CHECK(single < 1);
  }

  TEST_CASE("conditional energy coverage at the conditioned median") {
    NetworkConfig c;
    const double r = 1.2 * c.altitude_m;
    c.energy_threshold_j = oracle::quantile(sample_conditioned_harvest(c, r, kSlots, 8), 0.5);
    CHECK(std::abs(cond_energy_coverage(c, r) - 0.5) <= 0.01);
  }

  TEST_CASE("approximate energy coverage") {
    NetworkConfig c;
    c.energy_threshold_j = 0;
    CHECK(energy_coverage_approx(c).value == 1.0);
    c = {};
    double prev = -1;
    for (double tau = 0.05; tau <= 0.5001; tau += 0.05) {
      c.tau = tau;
      const CoverageResult r = energy_coverage_approx(c);
      CHECK(r.method == CoverageMethod::GammaApprox);
      CHECK(r.value >= prev - 1e-6);
      prev = r.value;
    }
  }

  TEST_CASE("interference jet") {
    NetworkConfig c;
    const double r = 1.1 * c.altitude_m;
    CHECK(interference_laplace_jet(c, r, 0.0, 0)[0] == Approx(1.0).epsilon(1e-12));
    NetworkConfig single = c;
    single.n_uavs = 1;
    const numerics::Jet one = interference_laplace_jet(single, r, 1e9, 3);
    CHECK(one[0] == 1.0);
    CHECK(one[1] == 0.0);

    // Order-2 jet against finite differences of an independent quadrature.
    const double p0 = c.tx_power_w * path_loss(c, r);
    const double s0 = 1.0 / p0;
    const numerics::Jet j = interference_laplace_jet(c, r, s0, 2);
    auto direct = [&](double s) { return direct_interference_laplace(c, r, s); };
    CHECK(j[0] == Approx(direct(s0)).epsilon(1e-7));
    for (int k = 1; k <= 2; ++k)
      CHECK(j.derivative(k) == Approx(oracle::derivative(direct, s0, k, 0.05 * s0)).epsilon(1e-5));
  }

  TEST_CASE("conditional SINR coverage") {
    NetworkConfig c;
    const double r = 1.1 * c.altitude_m;
    c.sinr_threshold = 1e-12;
    CHECK(cond_comm_coverage(c, r) == Approx(1.0).epsilon(1e-9));

    // m = 1 keeps only the k = 0 term: E_S[exp(-noise s*) L_I(s*)].
    c = {};
    c.nakagami_m = 1;
    const double p0 = c.tx_power_w * path_loss(c, r);
    const double expected = oracle::simpson(
        [&](double g) {
          if (g <= 0) return 0.0;
          const double s = c.shadow_gamma / g;  // serving shadowing
          const double s_star = c.sinr_threshold / (p0 * s);
          const double dens = std::exp((c.shadow_q - 1) * std::log(g) - g - std::lgamma(c.shadow_q));
          return dens * std::exp(-c.noise_w * s_star) * direct_interference_laplace(c, r, s_star, 100, 2000);
        },
        0.0, 40.0, 800);
    CHECK(cond_comm_coverage(c, r) == Approx(expected).epsilon(1e-5));

    // No interference and no noise: always covered.
    c = {};
    c.noise_w = 0;
    const double v = cond_comm_coverage_with(
        c, r, [](double, double, int order) { return numerics::Jet::constant(order, 1.0); });
    CHECK(v == Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("conditional SINR coverage against conditioned simulation") {
    const NetworkConfig c;
    const double r = 1.1 * c.altitude_m;
    const McEstimate mc = simulate_conditioned(c, r, kSlots, 12);
    CHECK(within_3_halfwidths(cond_comm_coverage(c, r), mc.p_c, mc.halfwidth_c));
  }

  TEST_CASE("SINR coverage") {
    NetworkConfig c;
    c.sinr_threshold = 1e-12;
    CHECK(comm_coverage(c).value == Approx(1.0).epsilon(1e-8));
    c = {};
    double prev = 1.0;
    for (int i = 0; i < 20; ++i) {
      c.sinr_threshold = 0.01 * std::pow(1.5, i);
      const double v = comm_coverage(c).value;
      CHECK(v <= prev + 1e-8);
      CHECK(v >= 0.0);
      prev = v;
    }
    c = {};
    const McEstimate mc = simulate(c, kSlots, 77);
    CHECK(within_3_halfwidths(comm_coverage(c).value, mc.p_c, mc.halfwidth_c));
  }

  TEST_CASE("coverage is non-increasing in the energy threshold") {
    NetworkConfig c;
    const double mean = mean_harvested_energy(c);
    double prev_exact = 1.0, prev_approx = 1.0;
    for (int i = 0; i < 20; ++i) {
      c.energy_threshold_j = mean * 0.1 * std::pow(1.25, i);
      const double e = energy_coverage_exact(c).value;
      const double a = energy_coverage_approx(c).value;
      CHECK(e <= prev_exact + 1e-6);
      CHECK(a <= prev_approx + 1e-8);
      prev_exact = e;
      prev_approx = a;
    }
  }

  TEST_CASE("joint coverage limits and bounds") {
    NetworkConfig c;
    c.energy_threshold_j = 0;
    CHECK(joint_coverage(c).value == Approx(comm_coverage(c).value).epsilon(1e-12));
    c = {};
    c.sinr_threshold = 1e-12;
    CHECK(joint_coverage(c).value == Approx(energy_coverage_approx(c).value).epsilon(1e-8));
    c = {};
    const CoverageSummary s = coverage_summary(c);
    CHECK(s.joint.value <= std::min(s.energy_approx.value, s.comm.value) + 1e-8);
    for (int i = 0; i < 20; ++i) {
      const double r = c.altitude_m + (c.max_distance() - c.altitude_m) * (i + 0.5) / 20.0;
      const double ph = cond_energy_coverage(c, r);
      const double pc = cond_comm_coverage(c, r);
      CHECK(ph >= 0);
      CHECK(ph <= 1);
      CHECK(pc >= 0);
      CHECK(pc <= 1);
      CHECK(ph * pc <= std::min(ph, pc) + 1e-15);
    }
  }

  TEST_CASE("joint coverage against simulation at 40th percentile thresholds") {
    NetworkConfig c;
    const std::vector<SlotOutcome> slots = simulate_slots(c, kSlots, 90);
    std::vector<double> e, sinr;
    for (const SlotOutcome& s : slots) {
      e.push_back(s.harvested_j);
      sinr.push_back(s.sinr);
    }
    c.energy_threshold_j = oracle::quantile(e, 0.4);
    c.sinr_threshold = oracle::quantile(sinr, 0.4);
    const McEstimate mc = simulate(c, kSlots, 91);
    const double joint = joint_coverage(c).value;
    CAPTURE(joint);
    CAPTURE(mc.p_jc);
    CHECK(within_3_halfwidths(joint, mc.p_jc, mc.halfwidth_jc));
  }

  TEST_CASE("invalid serving distance") {
    const NetworkConfig c;
    CHECK_THROWS_AS(cond_comm_coverage(c, 50.0), std::domain_error);
    CHECK_THROWS_AS(cond_energy_coverage(c, 1e4), std::domain_error);
  }
}
