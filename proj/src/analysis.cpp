#include "uavcov/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "uavcov/geometry.hpp"

namespace uavcov {

using numerics::Jet;
using numerics::QuadratureSpec;

const char* to_string(CoverageMethod method) {
  switch (method) {
    case CoverageMethod::ExactLaplace:
      return "exact-laplace";
    case CoverageMethod::GammaApprox:
      return "gamma-approx";
    case CoverageMethod::MonteCarlo:
      return "monte-carlo";
  }
  return "unknown";
}

namespace {

// Outermost quadrature errors above this abort the evaluation; smaller misses
// are reported as warnings.
constexpr double kFatalQuadratureError = 1e-4;

template <class T>
T ipow(T base, int n) {
  T result = T(1.0);
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

// K (h^2 + x^2)^(-alpha/2) at horizontal offset x.
double gain_at_offset(const NetworkConfig& c, double k_const, double x) {
  return k_const * std::pow(c.altitude_m * c.altitude_m + x * x, -0.5 * c.alpha);
}

InvGammaDensity shadow_density(const NetworkConfig& c) {
  return InvGammaDensity(c.shadow_q, c.shadow_gamma);
}

void check_serving_distance(const NetworkConfig& c, double r) {
  if (!(r >= c.altitude_m && r < c.max_distance()))
    throw std::domain_error("serving distance outside [h, sqrt(h^2+R^2))");
}

double regularized_upper_gamma(double shape, double x) {
  if (x <= 0) return 1.0;
  return boost::math::gamma_q(shape, x);
}

CoverageResult finish(double raw, CoverageMethod method, const numerics::QuadResult<double>& q,
                      const char* what) {
  CoverageResult out;
  out.method = method;
  out.raw_value = raw;
  out.value = std::clamp(raw, 0.0, 1.0);
  if (!q.converged) {
    if (q.abs_error > kFatalQuadratureError)
      throw numerics::AccuracyError(std::string(what) + ": quadrature over serving distance failed",
                                    raw, q.abs_error);
    out.warning = true;
    std::ostringstream msg;
    msg << what << ": outer quadrature tolerance missed (error " << q.abs_error << ")";
    out.diagnostics = msg.str();
  }
  if (std::abs(raw - out.value) > 1e-6) {
    out.warning = true;
    if (!out.diagnostics.empty()) out.diagnostics += "; ";
    out.diagnostics += std::string(what) + ": value clamped into [0, 1]";
  }
  return out;
}

// ---- energy ----------------------------------------------------------------

// P(E_h >= gamma_h | r) with the outer shadowing integral at tolerance `spec`.
double cond_energy_impl(const NetworkConfig& c, double r, const QuadratureSpec& spec,
                        const AnalysisOptions& options) {
  const double gamma_h = c.energy_threshold_j;
  if (gamma_h <= 0) return 1.0;
  const double scale = c.harvest_scale();
  if (scale == 0.0) return 0.0;
  const int m = c.nakagami_m;
  const double serving = scale * path_loss(c, r);
  const QuadratureSpec inner = spec.nested();
  const InvGammaDensity shadow_pdf = shadow_density(c);

  if (c.n_uavs == 1) {
    auto integrand = [&](double s) {
      const double w = shadow_pdf(s);
      if (w == 0.0) return 0.0;
      return w * regularized_upper_gamma(m, m * gamma_h / (serving * s));
    };
    return std::clamp(numerics::integrate_semi_infinite(integrand, 0.0, spec).value, 0.0, 1.0);
  }

  const MomParams mp = mom_params(c, r, options);
  auto integrand = [&](double s) {
    const double w = shadow_pdf(s);
    if (w == 0.0) return 0.0;
    // Fading values above y_max cover the threshold on the serving link alone.
    const double y_max = gamma_h / (serving * s);
    const double tail = regularized_upper_gamma(m, m * y_max);
    auto body = [&](double y) {
      if (y <= 0) return 0.0;
      const double residual = gamma_h - serving * s * y;
      return regularized_upper_gamma(mp.k_mom, residual / mp.theta_mom) * gamma_fading_pdf(m, y);
    };
    const double covered = numerics::integrate_adaptive(body, 0.0, y_max, inner).value;
    return w * (covered + tail);
  };
  return std::clamp(numerics::integrate_semi_infinite(integrand, 0.0, spec).value, 0.0, 1.0);
}

// ---- SINR ------------------------------------------------------------------

// Jet of J(s)^(N-1) in units where powers are divided by p l(r).
Jet normalized_interference_jet(const NetworkConfig& c, double r, double s0, int order,
                                const QuadratureSpec& spec) {
  if (c.n_uavs == 1) return Jet::constant(order, 1.0);
  check_serving_distance(c, r);
  const int mi = c.interference_m();
  const double h2 = c.altitude_m * c.altitude_m;
  const double r2 = r * r;
  const double xr = horizontal_offset(c, r);
  const double width = c.radius_m - xr;
  std::vector<double> binom(order + 1);
  for (int k = 0; k <= order; ++k)
    binom[k] = boost::math::binomial_coefficient<double>(mi + k - 1, k);
  const QuadratureSpec inner = spec.nested();
  const InvGammaDensity shadow_pdf = shadow_density(c);

  auto over_offset = [&](double x) {
    // Interferer mean power relative to the serving link, divided by m_I.
    const double beta = std::pow((h2 + x * x) / r2, -0.5 * c.alpha) / mi;
    auto over_shadow = [&](double s) {
      Jet out(order);
      const double w = shadow_pdf(s);
      if (w == 0.0) return out;
      const double b = beta * s;
      const double base = 1.0 / (1.0 + s0 * b);
      double term = w * ipow(base, mi);
      const double step = -b * base;
      for (int k = 0; k <= order; ++k) {
        out[k] = binom[k] * term;
        term *= step;
      }
      return out;
    };
    return numerics::integrate_semi_infinite(over_shadow, 0.0, inner).value;
  };
  Jet single = numerics::jet_eval(over_offset, xr, c.radius_m, spec).value;
  single *= 1.0 / width;
  return numerics::pow(single, c.n_uavs - 1);
}

double cond_comm_impl(const NetworkConfig& c, double r, const InterferenceJetFn& jet_fn,
                      const QuadratureSpec& spec) {
  const int m = c.nakagami_m;
  const int order = m - 1;
  const double serving_power = c.tx_power_w * path_loss(c, r);
  const double noise = c.noise_w / serving_power;
  const double gamma_c = c.sinr_threshold;
  const InvGammaDensity shadow_pdf = shadow_density(c);

  auto integrand = [&](double s) {
    const double w = shadow_pdf(s);
    if (w == 0.0) return 0.0;
    const double s_star = m * gamma_c / s;
    const Jet noise_jet = numerics::exp(Jet::variable(order, s_star) * (-noise));
    const Jet total = noise_jet * jet_fn(r, s_star, order);
    double sum = 0.0;
    double power = 1.0;
    for (int k = 0; k <= order; ++k) {
      sum += power * total[k];
      power *= -s_star;
    }
    return w * sum;
  };
  return numerics::integrate_semi_infinite(integrand, 0.0, spec).value;
}

// ---- shared pass over the serving distance ---------------------------------

struct PassResult {
  numerics::QuadResult<std::array<double, 3>> q;  // {joint, energy, comm}
};

PassResult serving_pass(const NetworkConfig& c, const AnalysisOptions& options, bool need_energy,
                        bool need_comm) {
  const QuadratureSpec per_r = options.quad.nested();
  const QuadratureSpec jet_spec = per_r.nested();
  const InterferenceJetFn jet_fn = [&](double r, double s0, int order) {
    return normalized_interference_jet(c, r, s0, order, jet_spec);
  };
  auto integrand = [&](double x) {
    const double f = serving_offset_pdf(c, x);
    const double r = std::hypot(c.altitude_m, x);
    const double ph = need_energy ? cond_energy_impl(c, r, per_r, options) : 1.0;
    const double pc = need_comm ? std::clamp(cond_comm_impl(c, r, jet_fn, per_r), 0.0, 1.0) : 1.0;
    return std::array<double, 3>{f * ph * pc, f * ph, f * pc};
  };
  return {numerics::integrate_adaptive(integrand, 0.0, c.radius_m, options.quad)};
}

numerics::QuadResult<double> component(const PassResult& p, int i) {
  return {p.q.value[i], p.q.abs_error, p.q.subdivisions, p.q.converged};
}

}  // namespace

// ---- public: energy -----------------------------------------------------------

std::complex<double> energy_laplace(const NetworkConfig& config, std::complex<double> s,
                                    const AnalysisOptions& options) {
  config.validate();
  const double scale = config.harvest_scale();
  if (s == 0.0 || scale == 0.0) return 1.0;
  const int m = config.nakagami_m;
  const double k_const = config.path_loss_constant();
  const std::complex<double> z = s * scale / static_cast<double>(m);
  const QuadratureSpec outer = options.laplace_quad;
  const QuadratureSpec inner = outer.nested();
  const InvGammaDensity shadow_pdf = shadow_density(config);

  auto over_offset = [&](double x) {
    const std::complex<double> zg = z * gain_at_offset(config, k_const, x);
    auto over_shadow = [&](double sh) -> std::complex<double> {
      const double w = shadow_pdf(sh);
      if (w == 0.0) return 0.0;
      return w * ipow(1.0 / (1.0 + zg * sh), m);
    };
    return numerics::integrate_semi_infinite(over_shadow, 0.0, inner).value;
  };
  const std::complex<double> single =
      numerics::integrate_adaptive(over_offset, 0.0, config.radius_m, outer).value /
      config.radius_m;
  return ipow(single, config.n_uavs);
}

double mean_harvested_energy(const NetworkConfig& config, const AnalysisOptions& options) {
  config.validate();
  const double k_const = config.path_loss_constant();
  const double mean_gain =
      numerics::integrate([&](double x) { return gain_at_offset(config, k_const, x); }, 0.0,
                          config.radius_m, options.quad) /
      config.radius_m;
  return config.n_uavs * config.harvest_scale() * config.shadow_mean() * mean_gain;
}

CoverageResult energy_coverage_exact(const NetworkConfig& config, const AnalysisOptions& options) {
  config.validate();
  CoverageResult out;
  out.method = CoverageMethod::ExactLaplace;
  if (config.energy_threshold_j <= 0) {
    out.value = out.raw_value = 1.0;
    return out;
  }
  if (config.harvest_scale() == 0.0) {
    out.value = out.raw_value = 0.0;
    return out;
  }
  const numerics::LaplaceFn transform = [&](std::complex<double> s) {
    return energy_laplace(config, s, options);
  };
  const numerics::CdfInversion cdf =
      numerics::inverse_laplace_cdf(transform, config.energy_threshold_j, options.inversion);
  out.value = 1.0 - cdf.value;
  out.raw_value = 1.0 - cdf.raw;
  if (cdf.warning) {
    out.warning = true;
    std::ostringstream msg;
    msg << "energy_coverage_exact: inverted CDF " << cdf.raw << " clamped into [0, 1]";
    out.diagnostics = msg.str();
  }
  return out;
}

NodeHarvestMoments node_harvest_moments(const NetworkConfig& config, double r,
                                        const AnalysisOptions& options) {
  config.validate();
  check_serving_distance(config, r);
  const double k_const = config.path_loss_constant();
  const double xr = horizontal_offset(config, r);
  const double width = config.radius_m - xr;
  const double mean_gain =
      numerics::integrate([&](double x) { return gain_at_offset(config, k_const, x); }, xr,
                          config.radius_m, options.quad.nested()) /
      width;
  const double mean_sq_gain = numerics::integrate(
                                  [&](double x) {
                                    const double g = gain_at_offset(config, k_const, x);
                                    return g * g;
                                  },
                                  xr, config.radius_m, options.quad.nested()) /
                              width;
  const double q = config.shadow_q;
  const double g = config.shadow_gamma;
  const double shadow_second =
      q > 2 ? g * g / ((q - 1) * (q - 2)) : std::numeric_limits<double>::infinity();
  const double m = config.nakagami_m;
  const double scale = config.harvest_scale();
  return {scale * config.shadow_mean() * mean_gain,
          scale * scale * shadow_second * (m + 1) / m * mean_sq_gain};
}

MomParams mom_params(const NetworkConfig& config, double r, const AnalysisOptions& options) {
  if (config.n_uavs < 2)
    throw DegenerateModelError("mom_params: no non-serving UAVs when N = 1");
  if (config.shadow_q <= 2)
    throw DegenerateModelError("mom_params: shadowing variance is infinite for q <= 2");
  if (config.harvest_scale() == 0.0)
    throw DegenerateModelError("mom_params: harvested energy is identically zero");
  const NodeHarvestMoments node = node_harvest_moments(config, r, options);
  const double n = config.n_uavs - 1;
  MomParams mp{};
  mp.serving_r = r;
  mp.cond_mean = n * node.mean;
  // E[(sum X_i)^2] for n i.i.d. terms.
  mp.cond_second_moment = n * node.second_moment + n * (n - 1) * node.mean * node.mean;
  const double var = n * (node.second_moment - node.mean * node.mean);
  mp.k_mom = mp.cond_mean * mp.cond_mean / var;
  mp.theta_mom = var / mp.cond_mean;
  return mp;
}

double cond_energy_coverage(const NetworkConfig& config, double r, const AnalysisOptions& options) {
  config.validate();
  check_serving_distance(config, r);
  return cond_energy_impl(config, r, options.quad, options);
}

CoverageResult energy_coverage_approx(const NetworkConfig& config, const AnalysisOptions& options) {
  config.validate();
  const PassResult p = serving_pass(config, options, true, false);
  return finish(p.q.value[1], CoverageMethod::GammaApprox, component(p, 1),
                "energy_coverage_approx");
}

// ---- public: SINR -------------------------------------------------------------

Jet interference_laplace_jet(const NetworkConfig& config, double r, double s0, int order,
                             const AnalysisOptions& options) {
  config.validate();
  check_serving_distance(config, r);
  const double serving_power = config.tx_power_w * path_loss(config, r);
  Jet jet = normalized_interference_jet(config, r, s0 * serving_power, order, options.quad);
  double scale = 1.0;
  for (int k = 0; k <= order; ++k) {
    jet[k] *= scale;
    scale *= serving_power;
  }
  return jet;
}

double cond_comm_coverage_with(const NetworkConfig& config, double r,
                               const InterferenceJetFn& normalized_jet,
                               const AnalysisOptions& options) {
  config.validate();
  check_serving_distance(config, r);
  return std::clamp(cond_comm_impl(config, r, normalized_jet, options.quad), 0.0, 1.0);
}

double cond_comm_coverage(const NetworkConfig& config, double r, const AnalysisOptions& options) {
  const QuadratureSpec jet_spec = options.quad.nested();
  return cond_comm_coverage_with(
      config, r,
      [&](double rr, double s0, int order) {
        return normalized_interference_jet(config, rr, s0, order, jet_spec);
      },
      options);
}

CoverageResult comm_coverage(const NetworkConfig& config, const AnalysisOptions& options) {
  config.validate();
  const PassResult p = serving_pass(config, options, false, true);
  CoverageResult out =
      finish(p.q.value[2], CoverageMethod::ExactLaplace, component(p, 2), "comm_coverage");
  return out;
}

// ---- public: joint ------------------------------------------------------------

CoverageResult joint_coverage(const NetworkConfig& config, const AnalysisOptions& options) {
  config.validate();
  const PassResult p = serving_pass(config, options, true, true);
  return finish(p.q.value[0], CoverageMethod::GammaApprox, component(p, 0), "joint_coverage");
}

CoverageSummary coverage_summary(const NetworkConfig& config, const AnalysisOptions& options,
                                 bool include_exact_energy) {
  config.validate();
  CoverageSummary out;
  const PassResult p = serving_pass(config, options, true, true);
  out.joint = finish(p.q.value[0], CoverageMethod::GammaApprox, component(p, 0), "joint_coverage");
  out.energy_approx =
      finish(p.q.value[1], CoverageMethod::GammaApprox, component(p, 1), "energy_coverage_approx");
  out.comm = finish(p.q.value[2], CoverageMethod::ExactLaplace, component(p, 2), "comm_coverage");
  if (include_exact_energy) out.energy_exact = energy_coverage_exact(config, options);
  return out;
}

}  // namespace uavcov
