#include "uavcov/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "uavcov/config_io.hpp"
#include "uavcov/util/format.hpp"

namespace uavcov {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTieTolerance = 1e-12;

std::vector<double> arithmetic_grid(double first, double step, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(first + step * i);
  return out;
}

void require_increasing(const std::vector<double>& grid, const char* name) {
  if (grid.empty()) throw std::invalid_argument(std::string(name) + ": grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument(std::string(name) + ": grid must be strictly increasing");
}

std::vector<NetworkConfig> grid_points(const SweepSpec& spec) {
  std::vector<NetworkConfig> out;
  switch (spec.variable) {
    case SweepVariable::Tau:
      for (double tau : spec.grid) {
        NetworkConfig c = spec.base;
        c.tau = tau;
        out.push_back(c);
      }
      break;
    case SweepVariable::NUavs:
      for (double n : spec.grid) {
        NetworkConfig c = spec.base;
        c.n_uavs = static_cast<int>(n);
        out.push_back(c);
      }
      break;
    case SweepVariable::GridRH:
      for (double r : spec.radius_grid)
        for (double h : spec.altitude_grid) {
          NetworkConfig c = spec.base;
          c.radius_m = r;
          c.altitude_m = h;
          out.push_back(c);
        }
      break;
  }
  return out;
}

void append(std::string& to, const std::string& what) {
  if (what.empty()) return;
  if (!to.empty()) to += "; ";
  to += what;
}

void evaluate_analytic(const SweepSpec& spec, SweepRow& row) {
  try {
    const CoverageSummary s = coverage_summary(row.config, spec.options, spec.exact_energy);
    row.p_h_exact = spec.exact_energy ? s.energy_exact.value : kNaN;
    row.p_h_approx = s.energy_approx.value;
    row.p_c = s.comm.value;
    row.p_jc = s.joint.value;
    append(row.warnings, s.energy_exact.diagnostics);
    append(row.warnings, s.energy_approx.diagnostics);
    append(row.warnings, s.comm.diagnostics);
    append(row.warnings, s.joint.diagnostics);
  } catch (const std::exception& e) {
    append(row.error, std::string("analytic: ") + e.what());
  }
}

bool on_grid_edge(std::size_t i, std::size_t n) { return i == 0 || i + 1 == n; }

double metric_value(const SweepRow& row, const std::string& metric) {
  if (metric == "p_h_exact") return row.p_h_exact;
  if (metric == "p_h_approx") return row.p_h_approx;
  if (metric == "p_c") return row.p_c;
  if (metric == "p_jc") return row.p_jc;
  if (!row.has_mc) return kNaN;
  if (metric == "mc_p_h") return row.mc.p_h;
  if (metric == "mc_p_c") return row.mc.p_c;
  if (metric == "mc_p_jc") return row.mc.p_jc;
  throw std::invalid_argument("unknown metric " + metric);
}

std::optional<ArgmaxRecord> sweep_argmax(const SweepResult& r, const std::string& metric) {
  std::vector<double> values;
  for (const SweepRow& row : r.rows) values.push_back(metric_value(row, metric));
  std::optional<ArgmaxRecord> rec = argmax(metric, values);
  if (!rec) return rec;
  if (r.spec.variable == SweepVariable::GridRH) {
    const std::size_t nh = r.spec.altitude_grid.size();
    rec->on_boundary = on_grid_edge(rec->best / nh, r.spec.radius_grid.size()) ||
                       on_grid_edge(rec->best % nh, nh);
  } else {
    rec->on_boundary = on_grid_edge(rec->best, r.rows.size());
  }
  return rec;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

void write_optimum(std::ostream& os, const char* label, const SweepResult& r,
                   const std::optional<ArgmaxRecord>& rec) {
  if (!rec) return;
  const NetworkConfig& best = r.rows[rec->best].config;
  os << "# " << label << " " << rec->metric << " best_row=" << rec->best
     << " value=" << util::format_number(rec->best_value) << " tau=" << util::format_number(best.tau)
     << " n_uavs=" << best.n_uavs << " radius_m=" << util::format_number(best.radius_m)
     << " altitude_m=" << util::format_number(best.altitude_m);
  if (rec->runner_up)
    os << " runner_up_row=" << *rec->runner_up
       << " runner_up_value=" << util::format_number(rec->runner_up_value)
       << " gap=" << util::format_number(rec->gap);
  os << " tie=" << (rec->tie ? "yes" : "no") << " boundary=" << (rec->on_boundary ? "yes" : "no")
     << " tie_break=" << (r.spec.variable == SweepVariable::GridRH ? "smaller_R_then_h" : "smaller_value")
     << '\n';
}

}  // namespace

const char* to_string(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::Tau:
      return "tau";
    case SweepVariable::NUavs:
      return "n_uavs";
    case SweepVariable::GridRH:
      return "grid_rh";
  }
  return "unknown";
}

SweepVariable sweep_variable_from_string(const std::string& name) {
  if (name == "tau") return SweepVariable::Tau;
  if (name == "n_uavs" || name == "n") return SweepVariable::NUavs;
  if (name == "grid_rh" || name == "rh") return SweepVariable::GridRH;
  throw std::invalid_argument("unknown sweep variable '" + name + "' (tau, n_uavs, grid_rh)");
}

std::vector<double> default_tau_grid() { return arithmetic_grid(0.025, 0.025, 20); }
std::vector<double> default_n_grid() { return arithmetic_grid(1, 1, 30); }
std::vector<double> default_radius_grid() { return arithmetic_grid(50, 50, 10); }
std::vector<double> default_altitude_grid() { return arithmetic_grid(50, 50, 6); }

void SweepSpec::validate() const {
  switch (variable) {
    case SweepVariable::Tau:
      require_increasing(grid, "tau");
      break;
    case SweepVariable::NUavs:
      require_increasing(grid, "n_uavs");
      for (double n : grid)
        if (n < 1 || n != std::floor(n))
          throw std::invalid_argument("n_uavs: grid values must be integers >= 1");
      break;
    case SweepVariable::GridRH:
      require_increasing(radius_grid, "radius_m");
      require_increasing(altitude_grid, "altitude_m");
      break;
  }
  if (!analytic && !monte_carlo) throw std::invalid_argument("sweep: no track selected");
  if (monte_carlo && mc_slots < 1) throw std::invalid_argument("mc_slots: must be >= 1");
  for (const NetworkConfig& c : grid_points(*this)) c.validate();
}

std::size_t SweepSpec::size() const {
  return variable == SweepVariable::GridRH ? radius_grid.size() * altitude_grid.size()
                                           : grid.size();
}

bool SweepResult::degraded() const {
  return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.error.empty(); });
}

std::optional<ArgmaxRecord> argmax(const std::string& metric, const std::vector<double>& values) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) continue;
    if (!best || values[i] > values[*best] + kTieTolerance) best = i;
  }
  if (!best) return std::nullopt;
  ArgmaxRecord rec;
  rec.metric = metric;
  rec.best = *best;
  rec.best_value = values[*best];
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == *best || std::isnan(values[i])) continue;
    if (!rec.runner_up || values[i] > values[*rec.runner_up] + kTieTolerance) rec.runner_up = i;
  }
  if (rec.runner_up) {
    rec.runner_up_value = values[*rec.runner_up];
    rec.gap = rec.best_value - rec.runner_up_value;
    rec.tie = rec.gap <= kTieTolerance;
  }
  return rec;
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  SweepResult result;
  result.spec = spec;
  for (const NetworkConfig& c : grid_points(spec)) {
    SweepRow row{c, kNaN, kNaN, kNaN, kNaN, {}, false, {}, {}};
    result.rows.push_back(row);
  }
  const long n = static_cast<long>(result.rows.size());

  if (spec.analytic) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) evaluate_analytic(spec, result.rows[i]);
  }

  if (spec.monte_carlo) {
    if (spec.variable == SweepVariable::Tau) {
      try {
        const std::vector<McEstimate> mc =
            simulate_tau_family(spec.base, spec.grid, spec.mc_slots, spec.seed);
        for (long i = 0; i < n; ++i) {
          result.rows[i].mc = mc[i];
          result.rows[i].has_mc = true;
        }
      } catch (const std::exception& e) {
        for (SweepRow& row : result.rows) append(row.error, std::string("monte-carlo: ") + e.what());
      }
    } else {
      // Same seed at every point: common random numbers across the grid.
      for (SweepRow& row : result.rows) {
        try {
          row.mc = simulate(row.config, spec.mc_slots, spec.seed);
          row.has_mc = true;
        } catch (const std::exception& e) {
          append(row.error, std::string("monte-carlo: ") + e.what());
        }
      }
    }
  }

  if (spec.analytic) result.analytic_optimum = sweep_argmax(result, "p_jc");
  if (spec.monte_carlo) result.mc_optimum = sweep_argmax(result, "mc_p_jc");
  return result;
}

std::vector<OptimalN> find_optimal_n(const NetworkConfig& config, int n_min, int n_max,
                                     const std::vector<double>& taus,
                                     const AnalysisOptions& options) {
  if (n_min < 1 || n_max < n_min) throw std::invalid_argument("find_optimal_n: bad N range");
  std::vector<OptimalN> out;
  for (double tau : taus) {
    SweepSpec spec;
    spec.variable = SweepVariable::NUavs;
    spec.grid = arithmetic_grid(n_min, 1, n_max - n_min + 1);
    spec.base = config;
    spec.base.tau = tau;
    spec.exact_energy = false;
    spec.options = options;
    SweepResult sweep = run_sweep(spec);
    if (!sweep.analytic_optimum)
      throw std::runtime_error("find_optimal_n: every point failed at tau = " +
                               util::format_number(tau));
    const ArgmaxRecord rec = *sweep.analytic_optimum;
    out.push_back({tau, sweep.rows[rec.best].config.n_uavs, rec, std::move(sweep)});
  }
  return out;
}

OptimalRH find_optimal_rh(const NetworkConfig& config, const std::vector<double>& radius_grid,
                          const std::vector<double>& altitude_grid,
                          const AnalysisOptions& options) {
  SweepSpec spec;
  spec.variable = SweepVariable::GridRH;
  spec.radius_grid = radius_grid;
  spec.altitude_grid = altitude_grid;
  spec.base = config;
  spec.exact_energy = false;
  spec.options = options;
  SweepResult sweep = run_sweep(spec);
  if (!sweep.analytic_optimum) throw std::runtime_error("find_optimal_rh: every point failed");
  const ArgmaxRecord rec = *sweep.analytic_optimum;
  const NetworkConfig& best = sweep.rows[rec.best].config;
  return {best.radius_m, best.altitude_m, rec, std::move(sweep)};
}

namespace {

// Root of decreasing p(threshold) = target over log(threshold) in [lo, hi];
// the bracket is widened until it straddles the target.
template <class Coverage>
double solve_threshold(Coverage&& coverage, double target, double lo, double hi, const char* what) {
  auto f = [&](double log_t) { return coverage(std::exp(log_t)) - target; };
  double a = std::log(lo);
  double b = std::log(hi);
  double fa = f(a);
  double fb = f(b);
  for (int i = 0; i < 20 && fa < 0; ++i) fa = f(a -= 2.0);
  for (int i = 0; i < 20 && fb > 0; ++i) fb = f(b += 2.0);
  if (fa < 0 || fb > 0) throw std::runtime_error(std::string(what) + ": target not bracketed");
  std::uintmax_t max_iter = 100;
  const auto root =
      boost::math::tools::toms748_solve(f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(40), max_iter);
  return std::exp(0.5 * (root.first + root.second));
}

}  // namespace

ThresholdCalibration calibrate_thresholds(const NetworkConfig& config, double target_p_h,
                                          double target_p_c, const AnalysisOptions& options) {
  config.validate();
  if (!(target_p_h > 0 && target_p_h < 1) || !(target_p_c > 0 && target_p_c < 1))
    throw std::invalid_argument("calibrate_thresholds: targets must lie in (0, 1)");
  if (config.harvest_scale() == 0.0)
    throw std::invalid_argument("calibrate_thresholds: tau = 0 harvests no energy");
  NetworkConfig c = config;
  const double mean = mean_harvested_energy(c, options);
  c.energy_threshold_j = solve_threshold(
      [&](double g) {
        NetworkConfig t = c;
        t.energy_threshold_j = g;
        return energy_coverage_exact(t, options).value;
      },
      target_p_h, 0.1 * mean, 10.0 * mean, "energy threshold");
  c.sinr_threshold = solve_threshold(
      [&](double g) {
        NetworkConfig t = c;
        t.sinr_threshold = g;
        return comm_coverage(t, options).value;
      },
      target_p_c, 0.01, 100.0, "SINR threshold");
  return {c.energy_threshold_j, c.sinr_threshold, energy_coverage_exact(c, options).value,
          comm_coverage(c, options).value};
}

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  using util::format_number;
  const SweepSpec& s = r.spec;
  os << "# uavcov sweep variable=" << to_string(s.variable) << " points=" << r.rows.size() << '\n';
  os << "# config " << config_echo(s.base) << '\n';
  os << "# thresholds energy_threshold_j=" << format_number(s.base.energy_threshold_j)
     << " sinr_threshold=" << format_number(s.base.sinr_threshold) << '\n';
  os << "# seed " << s.seed << " mc_slots " << (s.monte_carlo ? s.mc_slots : 0) << '\n';
  os << "# tracks analytic=" << (s.analytic ? "yes" : "no")
     << " exact_energy=" << (s.analytic && s.exact_energy ? "yes" : "no")
     << " monte_carlo=" << (s.monte_carlo ? "yes" : "no") << '\n';
  write_optimum(os, "analytic_optimum", r, r.analytic_optimum);
  write_optimum(os, "mc_optimum", r, r.mc_optimum);

  os << "index,tau,n_uavs,radius_m,altitude_m";
  if (s.analytic) os << ",p_h_exact,p_h_approx,p_c,p_jc";
  if (s.monte_carlo) os << ",mc_p_h,mc_hw_h,mc_p_c,mc_hw_c,mc_p_jc,mc_hw_jc";
  os << ",status,message\n";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const SweepRow& row = r.rows[i];
    os << i << ',' << format_number(row.config.tau) << ',' << row.config.n_uavs << ','
       << format_number(row.config.radius_m) << ',' << format_number(row.config.altitude_m);
    if (s.analytic)
      os << ',' << format_number(row.p_h_exact) << ',' << format_number(row.p_h_approx) << ','
         << format_number(row.p_c) << ',' << format_number(row.p_jc);
    if (s.monte_carlo) {
      if (row.has_mc)
        os << ',' << format_number(row.mc.p_h) << ',' << format_number(row.mc.halfwidth_h) << ','
           << format_number(row.mc.p_c) << ',' << format_number(row.mc.halfwidth_c) << ','
           << format_number(row.mc.p_jc) << ',' << format_number(row.mc.halfwidth_jc);
      else
        os << ",nan,nan,nan,nan,nan,nan";
    }
    const char* status = !row.error.empty() ? "failed" : !row.warnings.empty() ? "warning" : "ok";
    std::string message = row.error;
    append(message, row.warnings);
    os << ',' << status << ',' << csv_field(message) << '\n';
  }
}

void write_heatmap_matrix(std::ostream& os, const SweepResult& r, const std::string& metric) {
  if (r.spec.variable != SweepVariable::GridRH)
    throw std::invalid_argument("write_heatmap_matrix: sweep is not an (R, h) grid");
  const auto& rs = r.spec.radius_grid;
  const auto& hs = r.spec.altitude_grid;
  os << rs.size();
  for (double v : rs) os << ' ' << util::format_number(v);
  os << '\n';
  for (std::size_t j = 0; j < hs.size(); ++j) {
    os << util::format_number(hs[j]);
    for (std::size_t i = 0; i < rs.size(); ++i)
      os << ' ' << util::format_number(metric_value(r.rows[i * hs.size() + j], metric));
    os << '\n';
  }
}

}  // namespace uavcov
