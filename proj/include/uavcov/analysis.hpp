#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include "uavcov/model.hpp"
#include "uavcov/numerics/inverse_laplace.hpp"
#include "uavcov/numerics/jet.hpp"
#include "uavcov/numerics/quadrature.hpp"

namespace uavcov {

enum class CoverageMethod { ExactLaplace, GammaApprox, MonteCarlo };

const char* to_string(CoverageMethod method);

struct CoverageResult {
  double value = 0.0;
  CoverageMethod method = CoverageMethod::ExactLaplace;
  double ci_halfwidth = 0.0;
  /// Unclamped value; differs from `value` only when a numeric step overshot [0, 1].
  double raw_value = 0.0;
  bool warning = false;
  std::string diagnostics;
};

struct AnalysisOptions {
  /// Tolerance of the outermost integral; each nested level is 10x tighter.
  numerics::QuadratureSpec quad{1e-6, 1e-10, 200};
  /// Outer level of the harvested-energy Laplace transform. The Talbot sum
  /// amplifies transform errors, so this runs tighter than `quad`.
  numerics::QuadratureSpec laplace_quad{1e-10, 1e-14, 400};
  numerics::InverseLaplaceSpec inversion{};
};

/// Shape/scale of the Gamma law matched to the energy harvested from the
/// N - 1 non-serving UAVs, given serving distance r.
struct MomParams {
  double k_mom;
  double theta_mom;
  double cond_mean;
  double cond_second_moment;
  double serving_r;

  double variance() const { return cond_second_moment - cond_mean * cond_mean; }
};

/// First two moments of the energy one non-serving UAV delivers given r.
struct NodeHarvestMoments {
  double mean;
  double second_moment;
};

/// Thrown when a quantity is undefined for the configuration (for example the
/// moment match with a single UAV or with infinite shadowing variance).
class DegenerateModelError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// ---- harvested energy ----------------------------------------------------

/// E[exp(-s E_h)] for complex s, analytically continued off the real axis.
std::complex<double> energy_laplace(const NetworkConfig& config, std::complex<double> s,
                                    const AnalysisOptions& options = {});

/// Unconditional E[E_h].
double mean_harvested_energy(const NetworkConfig& config, const AnalysisOptions& options = {});

/// P(E_h >= gamma_h) by numerical Laplace inversion.
CoverageResult energy_coverage_exact(const NetworkConfig& config,
                                     const AnalysisOptions& options = {});

NodeHarvestMoments node_harvest_moments(const NetworkConfig& config, double r,
                                        const AnalysisOptions& options = {});
MomParams mom_params(const NetworkConfig& config, double r, const AnalysisOptions& options = {});

/// P(E_h >= gamma_h | r_s = r): serving-node energy integrated exactly over its
/// fading and shadowing, the rest through the matched Gamma law. With N = 1
/// the single-node probability is computed directly.
double cond_energy_coverage(const NetworkConfig& config, double r,
                            const AnalysisOptions& options = {});

CoverageResult energy_coverage_approx(const NetworkConfig& config,
                                      const AnalysisOptions& options = {});

// ---- SINR ----------------------------------------------------------------

/// Taylor jet in s at s0 of the interference Laplace transform given r,
/// L_I(s | r) = J(s)^(N-1). Coefficient k is d^k L_I / ds^k / k!.
numerics::Jet interference_laplace_jet(const NetworkConfig& config, double r, double s0,
                                       int order, const AnalysisOptions& options = {});

/// Jet provider in normalized units: powers are divided by p l(r), so s is
/// measured in units of 1 / (p l(r)). Arguments are (r, s0, order).
using InterferenceJetFn = std::function<numerics::Jet(double, double, int)>;

double cond_comm_coverage(const NetworkConfig& config, double r,
                          const AnalysisOptions& options = {});

/// cond_comm_coverage with a caller-supplied normalized interference jet.
double cond_comm_coverage_with(const NetworkConfig& config, double r,
                               const InterferenceJetFn& normalized_jet,
                               const AnalysisOptions& options = {});

CoverageResult comm_coverage(const NetworkConfig& config, const AnalysisOptions& options = {});

// ---- joint ---------------------------------------------------------------

CoverageResult joint_coverage(const NetworkConfig& config, const AnalysisOptions& options = {});

/// Energy (Gamma approximation), SINR and joint coverage from one shared
/// quadrature over the serving distance, plus the exact energy coverage when
/// requested.
struct CoverageSummary {
  CoverageResult energy_exact;
  CoverageResult energy_approx;
  CoverageResult comm;
  CoverageResult joint;
};

CoverageSummary coverage_summary(const NetworkConfig& config, const AnalysisOptions& options = {},
                                 bool include_exact_energy = true);

}  // namespace uavcov
