// uavcov: coverage of an RF-powered receiver under a UAV corridor.
//
//   uavcov eval                   analytic probabilities at one configuration
//   uavcov sweep                  tau / N / (R, h) sweeps, CSV + heatmap
//   uavcov mc                     Monte-Carlo estimate, optional per-slot dump
//   uavcov calibrate-thresholds   thresholds hitting target coverage levels
//
// Exit codes: 0 ok, 1 usage, 2 numeric failure, 3 degraded sweep.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>
#include <openssl/evp.h>

#include "uavcov/analysis.hpp"
#include "uavcov/config_io.hpp"
#include "uavcov/experiments.hpp"
#include "uavcov/montecarlo.hpp"
#include "uavcov/util/format.hpp"

#ifndef UAVCOV_VERSION
#define UAVCOV_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace uavcov;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumeric = 2, kDegraded = 3 };

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---- configuration ----------------------------------------------------------

struct Overrides {
  std::optional<int> n_uavs, nakagami_m, interferer_m;
  std::optional<double> altitude_m, radius_m, alpha, carrier_hz, shadow_q, shadow_gamma;
  std::optional<double> tx_power_w, tx_power_dbm, rf_dc_eff, slot_s, tau, noise_w, noise_dbm;
  std::optional<double> gamma_h, gamma_c;
};

struct Common {
  std::string config_path;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir;
  Overrides o;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "JSON config file (flat NetworkConfig keys)")
      ->check(CLI::ExistingFile);
  app->add_option("--seed", c.seed, "Monte-Carlo seed")->capture_default_str();
  app->add_option("--threads", c.threads, "Worker thread cap (0 = OpenMP default)")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--out-dir", c.out_dir, "Directory for output files and the manifest");

  Overrides& o = c.o;
  auto group = app->add_option_group("Overrides", "Per-field overrides, applied after --config");
  group->add_option("--n-uavs", o.n_uavs, "N, UAVs on the corridor");
  group->add_option("--altitude", o.altitude_m, "h, corridor altitude [m]");
  group->add_option("--radius", o.radius_m, "R, corridor half-length [m]");
  group->add_option("--alpha", o.alpha, "path-loss exponent");
  group->add_option("--carrier-hz", o.carrier_hz, "carrier frequency [Hz]");
  group->add_option("--nakagami-m", o.nakagami_m, "Nakagami fading shape (integer)");
  group->add_option("--interferer-m", o.interferer_m, "fading shape of interferers (0 = same)");
  group->add_option("--shadow-q", o.shadow_q, "inverse-gamma shadowing shape q");
  group->add_option("--shadow-gamma", o.shadow_gamma, "inverse-gamma shadowing scale");
  auto w = group->add_option("--tx-power-w", o.tx_power_w, "UAV transmit power [W]");
  auto dbm = group->add_option("--tx-power-dbm", o.tx_power_dbm, "UAV transmit power [dBm]");
  w->excludes(dbm);
  group->add_option("--eta", o.rf_dc_eff, "RF-to-DC efficiency in (0, 1)");
  group->add_option("--slot-s", o.slot_s, "slot duration T [s]");
  group->add_option("--tau", o.tau, "harvesting fraction of the slot in [0, 1]");
  auto nw = group->add_option("--noise-w", o.noise_w, "noise power [W]");
  auto nd = group->add_option("--noise-dbm", o.noise_dbm, "noise power [dBm]");
  nw->excludes(nd);
  group->add_option("--gamma-h", o.gamma_h, "energy threshold [J]");
  group->add_option("--gamma-c", o.gamma_c, "SINR threshold (linear)");
}

NetworkConfig resolve_config(const Common& c) {
  NetworkConfig cfg;
  if (!c.config_path.empty()) cfg = load_config(c.config_path);
  const Overrides& o = c.o;
  auto set = [](auto& field, const auto& value) {
    if (value) field = *value;
  };
  set(cfg.n_uavs, o.n_uavs);
  set(cfg.altitude_m, o.altitude_m);
  set(cfg.radius_m, o.radius_m);
  set(cfg.alpha, o.alpha);
  set(cfg.carrier_hz, o.carrier_hz);
  set(cfg.nakagami_m, o.nakagami_m);
  set(cfg.interferer_m, o.interferer_m);
  set(cfg.shadow_q, o.shadow_q);
  set(cfg.shadow_gamma, o.shadow_gamma);
  set(cfg.tx_power_w, o.tx_power_w);
  if (o.tx_power_dbm) cfg.tx_power_w = dbm_to_watt(*o.tx_power_dbm);
  set(cfg.rf_dc_eff, o.rf_dc_eff);
  set(cfg.slot_s, o.slot_s);
  set(cfg.tau, o.tau);
  set(cfg.noise_w, o.noise_w);
  if (o.noise_dbm) cfg.noise_w = dbm_to_watt(*o.noise_dbm);
  set(cfg.energy_threshold_j, o.gamma_h);
  set(cfg.sinr_threshold, o.gamma_c);
  cfg.validate();
  return cfg;
}

// ---- outputs ------------------------------------------------------------------

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

class RunOutputs {
 public:
  RunOutputs(std::string command, const Common& common, const NetworkConfig& config)
      : command_(std::move(command)), dir_(common.out_dir), seed_(common.seed), config_(config),
        started_(utc_now()) {
    if (enabled()) fs::create_directories(dir_);
  }

  bool enabled() const { return !dir_.empty(); }

  template <class Writer>
  void write(const std::string& name, Writer&& writer) {
    if (!enabled()) return;
    const fs::path path = dir_ / name;
    std::ofstream os(path, std::ios::binary);
    os.imbue(std::locale::classic());
    writer(os);
    os.close();
    if (!os) throw std::runtime_error("failed writing " + path.string());
    files_.push_back(name);
  }

  void finish(const json& extra = json::object()) {
    if (!enabled()) return;
    json m;
    m["tool"] = "uavcov";
    m["version"] = UAVCOV_VERSION;
    m["command"] = command_;
    m["config"] = config_to_json(config_);
    m["seed"] = seed_;
    m["started_utc"] = started_;
    m["finished_utc"] = utc_now();
    m["outputs"] = json::array();
    for (const std::string& f : files_)
      m["outputs"].push_back(
          {{"file", f}, {"sha256", sha256_file(dir_ / f)}, {"bytes", fs::file_size(dir_ / f)}});
    for (const auto& item : extra.items()) m[item.key()] = item.value();
    std::ofstream os(dir_ / "manifest.json");
    os << m.dump(2) << '\n';
  }

 private:
  std::string command_;
  fs::path dir_;
  std::uint64_t seed_;
  NetworkConfig config_;
  std::string started_;
  std::vector<std::string> files_;
};

std::string fmt(double v) { return util::format_number(v); }

void print_result(const char* name, const CoverageResult& r) {
  std::cout << std::left << std::setw(12) << name << fmt(r.value) << "  [" << to_string(r.method)
            << "]";
  if (r.ci_halfwidth > 0) std::cout << "  +/- " << fmt(r.ci_halfwidth);
  std::cout << '\n';
  if (r.warning) std::cerr << "warning: " << r.diagnostics << '\n';
}

json result_json(const CoverageResult& r) {
  json j{{"value", r.value}, {"method", to_string(r.method)}, {"raw_value", r.raw_value}};
  if (r.warning) j["diagnostics"] = r.diagnostics;
  return j;
}

// ---- subcommands --------------------------------------------------------------

int cmd_eval(const Common& common) {
  const NetworkConfig cfg = resolve_config(common);
  RunOutputs out("eval", common, cfg);
  const CoverageSummary s = coverage_summary(cfg);
  print_result("p_h_exact", s.energy_exact);
  print_result("p_h_approx", s.energy_approx);
  print_result("p_c", s.comm);
  print_result("p_jc", s.joint);
  const json j{{"config", config_to_json(cfg)},
               {"p_h_exact", result_json(s.energy_exact)},
               {"p_h_approx", result_json(s.energy_approx)},
               {"p_c", result_json(s.comm)},
               {"p_jc", result_json(s.joint)}};
  out.write("eval.json", [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  out.write("config.json", [&](std::ostream& os) { os << config_to_json(cfg).dump(2) << '\n'; });
  out.finish();
  return kOk;
}

struct SweepArgs {
  std::string spec_path;
  std::string variable = "tau";
  std::vector<double> grid, radius_grid, altitude_grid;
  bool mc = false;
  bool no_analytic = false;
  bool no_exact = false;
  long mc_slots = 1'000'000;
};

std::vector<double> json_grid(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  if (!j[key].is_array()) throw UsageError(std::string(key) + ": expected an array");
  return j[key].get<std::vector<double>>();
}

SweepSpec build_sweep_spec(const SweepArgs& a, const Common& common, CLI::App* app) {
  SweepSpec spec;
  spec.seed = common.seed;
  spec.mc_slots = a.mc_slots;
  NetworkConfig base = resolve_config(common);
  std::string variable = a.variable;
  if (!a.spec_path.empty()) {
    std::ifstream in(a.spec_path);
    if (!in) throw UsageError("cannot open sweep spec " + a.spec_path);
    json j;
    try {
      in >> j;
    } catch (const json::parse_error& e) {
      throw UsageError(a.spec_path + ": " + e.what());
    }
    if (j.contains("variable")) variable = j["variable"].get<std::string>();
    spec.grid = json_grid(j, "grid");
    spec.radius_grid = json_grid(j, "radius_grid");
    spec.altitude_grid = json_grid(j, "altitude_grid");
    if (j.contains("overrides")) base = config_from_json(j["overrides"], base);
    if (j.contains("tracks")) {
      spec.analytic = spec.monte_carlo = false;
      for (const auto& t : j["tracks"]) {
        const std::string name = t.get<std::string>();
        if (name == "analytic") spec.analytic = true;
        else if (name == "monte_carlo") spec.monte_carlo = true;
        else throw UsageError("tracks: unknown track " + name);
      }
    }
    if (j.contains("mc_slots")) spec.mc_slots = j["mc_slots"].get<long>();
    if (j.contains("seed") && app->count("--seed") == 0) spec.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("exact_energy")) spec.exact_energy = j["exact_energy"].get<bool>();
  }
  if (app->count("--variable")) variable = a.variable;
  spec.variable = sweep_variable_from_string(variable);
  if (!a.grid.empty()) spec.grid = a.grid;
  if (!a.radius_grid.empty()) spec.radius_grid = a.radius_grid;
  if (!a.altitude_grid.empty()) spec.altitude_grid = a.altitude_grid;
  if (a.mc) spec.monte_carlo = true;
  if (a.no_analytic) spec.analytic = false;
  if (a.no_exact) spec.exact_energy = false;
  if (app->count("--mc-slots")) spec.mc_slots = a.mc_slots;
  spec.base = base;

  if (spec.variable == SweepVariable::Tau && spec.grid.empty()) spec.grid = default_tau_grid();
  if (spec.variable == SweepVariable::NUavs && spec.grid.empty()) spec.grid = default_n_grid();
  if (spec.variable == SweepVariable::GridRH) {
    if (spec.radius_grid.empty()) spec.radius_grid = default_radius_grid();
    if (spec.altitude_grid.empty()) spec.altitude_grid = default_altitude_grid();
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

void print_optimum(const char* label, const SweepResult& r, const std::optional<ArgmaxRecord>& rec) {
  if (!rec) return;
  const NetworkConfig& c = r.rows[rec->best].config;
  std::cout << label << ": p_jc=" << fmt(rec->best_value);
  switch (r.spec.variable) {
    case SweepVariable::Tau:
      std::cout << " at tau=" << fmt(c.tau);
      break;
    case SweepVariable::NUavs:
      std::cout << " at N=" << c.n_uavs;
      break;
    case SweepVariable::GridRH:
      std::cout << " at R=" << fmt(c.radius_m) << " h=" << fmt(c.altitude_m);
      break;
  }
  if (rec->runner_up) std::cout << " (gap to runner-up " << fmt(rec->gap) << ")";
  if (rec->on_boundary) std::cout << " [grid boundary]";
  std::cout << '\n';
}

int cmd_sweep(const SweepArgs& args, const Common& common, CLI::App* app) {
  const SweepSpec spec = build_sweep_spec(args, common, app);
  RunOutputs out("sweep", common, spec.base);
  const SweepResult r = run_sweep(spec);
  if (out.enabled()) {
    out.write("sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, r); });
    if (spec.variable == SweepVariable::GridRH) {
      if (spec.analytic)
        out.write("heatmap_p_jc.dat", [&](std::ostream& os) { write_heatmap_matrix(os, r, "p_jc"); });
      if (spec.monte_carlo)
        out.write("heatmap_mc_p_jc.dat",
                  [&](std::ostream& os) { write_heatmap_matrix(os, r, "mc_p_jc"); });
    }
    out.write("config.json",
              [&](std::ostream& os) { os << config_to_json(spec.base).dump(2) << '\n'; });
  } else {
    write_sweep_csv(std::cout, r);
  }
  print_optimum("analytic optimum", r, r.analytic_optimum);
  print_optimum("monte-carlo optimum", r, r.mc_optimum);
  long failed = 0;
  for (const SweepRow& row : r.rows) failed += !row.error.empty();
  out.finish({{"sweep_variable", to_string(spec.variable)},
              {"rows", r.rows.size()},
              {"failed_rows", failed}});
  if (failed > 0) {
    std::cerr << "sweep degraded: " << failed << " of " << r.rows.size() << " points failed\n";
    return kDegraded;
  }
  return kOk;
}

int cmd_mc(const Common& common, long n_slots, bool dump_slots) {
  const NetworkConfig cfg = resolve_config(common);
  RunOutputs out("mc", common, cfg);
  const McEstimate e = simulate(cfg, n_slots, common.seed);
  std::cout << "p_h   " << fmt(e.p_h) << "  +/- " << fmt(e.halfwidth_h) << '\n'
            << "p_c   " << fmt(e.p_c) << "  +/- " << fmt(e.halfwidth_c) << '\n'
            << "p_jc  " << fmt(e.p_jc) << "  +/- " << fmt(e.halfwidth_jc) << '\n'
            << "slots " << e.n_slots << "  seed " << e.seed << '\n';
  out.write("mc.csv", [&](std::ostream& os) {
    os << "# config " << config_echo(cfg) << '\n';
    os << "# seed " << e.seed << " n_slots " << e.n_slots << '\n';
    os << "metric,estimate,halfwidth_95\n";
    os << "p_h," << fmt(e.p_h) << ',' << fmt(e.halfwidth_h) << '\n';
    os << "p_c," << fmt(e.p_c) << ',' << fmt(e.halfwidth_c) << '\n';
    os << "p_jc," << fmt(e.p_jc) << ',' << fmt(e.halfwidth_jc) << '\n';
  });
  if (dump_slots) {
    if (!out.enabled()) throw UsageError("--dump-slots requires --out-dir");
    const std::vector<SlotOutcome> slots = simulate_slots(cfg, n_slots, common.seed);
    out.write("slots.csv", [&](std::ostream& os) { write_slots_csv(os, slots); });
  }
  out.write("config.json", [&](std::ostream& os) { os << config_to_json(cfg).dump(2) << '\n'; });
  out.finish({{"n_slots", n_slots}});
  return kOk;
}

int cmd_calibrate(const Common& common, double target_h, double target_c) {
  NetworkConfig cfg = resolve_config(common);
  RunOutputs out("calibrate-thresholds", common, cfg);
  const ThresholdCalibration t = calibrate_thresholds(cfg, target_h, target_c);
  cfg.energy_threshold_j = t.energy_threshold_j;
  cfg.sinr_threshold = t.sinr_threshold;
  std::cout << "energy_threshold_j " << util::format_number(t.energy_threshold_j, 17)
            << "  (p_h_exact " << fmt(t.p_h) << ")\n"
            << "sinr_threshold     " << util::format_number(t.sinr_threshold, 17) << "  (p_c "
            << fmt(t.p_c) << ")\n";
  out.write("config.json", [&](std::ostream& os) { os << config_to_json(cfg).dump(2) << '\n'; });
  out.finish({{"target_p_h", target_h}, {"target_p_c", target_c}});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Energy, SINR and joint coverage of an RF-powered receiver under a UAV corridor.\n"
      "Units: meters, Hz, watts (or dBm where noted), seconds, joules, linear SINR."};
  app.set_version_flag("--version", UAVCOV_VERSION);
  app.require_subcommand(1);

  Common common;
  auto eval = app.add_subcommand("eval", "Analytic p_h (exact and Gamma approx), p_c and p_jc");
  add_common(eval, common);

  SweepArgs sweep_args;
  auto sweep = app.add_subcommand("sweep", "Parameter sweep over tau, N or the (R, h) grid");
  add_common(sweep, common);
  sweep->add_option("--spec", sweep_args.spec_path, "JSON sweep spec")->check(CLI::ExistingFile);
  sweep->add_option("--variable", sweep_args.variable, "tau | n_uavs | grid_rh")
      ->capture_default_str();
  sweep->add_option("--grid", sweep_args.grid, "tau or N values")->delimiter(',');
  sweep->add_option("--r-grid", sweep_args.radius_grid, "R values [m]")->delimiter(',');
  sweep->add_option("--h-grid", sweep_args.altitude_grid, "h values [m]")->delimiter(',');
  sweep->add_flag("--mc", sweep_args.mc, "Add the Monte-Carlo track");
  sweep->add_flag("--no-analytic", sweep_args.no_analytic, "Skip the analytic track");
  sweep->add_flag("--no-exact", sweep_args.no_exact, "Skip the Laplace-inversion p_h column");
  sweep->add_option("--mc-slots", sweep_args.mc_slots, "Slots per Monte-Carlo point")
      ->capture_default_str();

  long mc_slots = 1'000'000;
  bool dump_slots = false;
  auto mc = app.add_subcommand("mc", "Monte-Carlo estimate of p_h, p_c, p_jc");
  add_common(mc, common);
  mc->add_option("--slots", mc_slots, "Number of simulated slots")->capture_default_str();
  mc->add_flag("--dump-slots", dump_slots, "Write one CSV row per slot (requires --out-dir)");

  double target_h = 0.8;
  double target_c = 0.6;
  auto cal = app.add_subcommand("calibrate-thresholds",
                                "Solve for thresholds giving target p_h (exact) and p_c");
  add_common(cal, common);
  cal->add_option("--target-ph", target_h, "Target energy coverage")->capture_default_str();
  cal->add_option("--target-pc", target_c, "Target SINR coverage")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (common.threads > 0) omp_set_num_threads(common.threads);
  try {
    if (*eval) return cmd_eval(common);
    if (*sweep) return cmd_sweep(sweep_args, common, sweep);
    if (*mc) return cmd_mc(common, mc_slots, dump_slots);
    if (*cal) return cmd_calibrate(common, target_h, target_c);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const numerics::AccuracyError& e) {
    std::cerr << "numeric failure (numerics): " << e.what() << '\n';
    return kNumeric;
  } catch (const DegenerateModelError& e) {
    std::cerr << "numeric failure (analysis): " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  }
  return kUsage;
}
