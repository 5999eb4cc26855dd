#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uavcov/analysis.hpp"
#include "uavcov/model.hpp"
#include "uavcov/montecarlo.hpp"

namespace uavcov {

enum class SweepVariable { Tau, NUavs, GridRH };

const char* to_string(SweepVariable variable);
SweepVariable sweep_variable_from_string(const std::string& name);

struct SweepSpec {
  SweepVariable variable = SweepVariable::Tau;
  /// Values of tau or N; unused for GridRH.
  std::vector<double> grid;
  std::vector<double> radius_grid;
  std::vector<double> altitude_grid;
  /// Every field not swept is taken from here.
  NetworkConfig base;
  bool analytic = true;
  /// The Laplace-inversion energy coverage costs little; it is on by default.
  bool exact_energy = true;
  bool monte_carlo = false;
  long mc_slots = 1'000'000;
  std::uint64_t seed = 1;
  AnalysisOptions options;

  /// Throws std::invalid_argument for empty or non-increasing grids.
  void validate() const;
  std::size_t size() const;
};

/// Default grids.
std::vector<double> default_tau_grid();       // 0.025, 0.05, ..., 0.5
std::vector<double> default_n_grid();         // 1..30
std::vector<double> default_radius_grid();    // 50, 100, ..., 500
std::vector<double> default_altitude_grid();  // 50, 100, ..., 300

/// Probabilities not computed for a row are NaN.
struct SweepRow {
  NetworkConfig config;
  double p_h_exact;
  double p_h_approx;
  double p_c;
  double p_jc;
  McEstimate mc;
  bool has_mc = false;
  std::string error;     // non-empty when the point failed
  std::string warnings;  // numeric diagnostics from analysis
};

/// Best row for one metric. Ties (equal within 1e-12) go to the earlier row;
/// rows are ordered so that this means smaller N, or smaller R then smaller h.
struct ArgmaxRecord {
  std::string metric;
  std::size_t best = 0;
  double best_value = 0.0;
  std::optional<std::size_t> runner_up;
  double runner_up_value = 0.0;
  double gap = 0.0;
  bool tie = false;
  /// Best row sits at the edge of the grid (either axis for GridRH).
  bool on_boundary = false;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;
  std::optional<ArgmaxRecord> analytic_optimum;  // of p_jc
  std::optional<ArgmaxRecord> mc_optimum;        // of MC p_jc

  bool degraded() const;
};

/// Rows follow the grid order; GridRH runs R-major (R outer, h inner).
/// Analytic points are evaluated concurrently. A failing point records its
/// error and the sweep continues.
SweepResult run_sweep(const SweepSpec& spec);

/// Argmax of `values` with the tie rule above; NaN entries are skipped.
/// Returns nullopt when every value is NaN.
std::optional<ArgmaxRecord> argmax(const std::string& metric, const std::vector<double>& values);

struct OptimalN {
  double tau;
  int n_star;
  ArgmaxRecord record;
  SweepResult sweep;
};

/// Exhaustive analytic search of p_jc over N in [n_min, n_max] for each tau.
std::vector<OptimalN> find_optimal_n(const NetworkConfig& config, int n_min, int n_max,
                                     const std::vector<double>& taus,
                                     const AnalysisOptions& options = {});

struct OptimalRH {
  double radius_m;
  double altitude_m;
  ArgmaxRecord record;
  SweepResult sweep;
};

OptimalRH find_optimal_rh(const NetworkConfig& config, const std::vector<double>& radius_grid,
                          const std::vector<double>& altitude_grid,
                          const AnalysisOptions& options = {});

struct ThresholdCalibration {
  double energy_threshold_j;
  double sinr_threshold;
  double p_h;  // exact energy coverage at the calibrated threshold
  double p_c;
};

/// Solves energy_coverage_exact = target_p_h and comm_coverage = target_p_c
/// for the two thresholds (root bracketing in log-threshold).
ThresholdCalibration calibrate_thresholds(const NetworkConfig& config, double target_p_h = 0.8,
                                          double target_p_c = 0.6,
                                          const AnalysisOptions& options = {});

/// CSV with a comment header ("# config ...", "# seed ...", ...), then one row
/// per grid point. 12 significant digits.
void write_sweep_csv(std::ostream& os, const SweepResult& result);

/// gnuplot "matrix nonuniform" layout of a GridRH metric ("p_jc" or
/// "mc_p_jc"): first line holds the column count then the R values, each
/// following line holds h and then one value per R.
void write_heatmap_matrix(std::ostream& os, const SweepResult& result,
                          const std::string& metric = "p_jc");

}  // namespace uavcov
