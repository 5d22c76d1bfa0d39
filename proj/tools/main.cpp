// Command-line front end: entropy traces, steady-state sweeps and the
// brute-force validation suite, with CSV/JSON output pinned down to the byte.
//
// Exit codes: 0 success, 1 bad configuration, 2 physics/validation failure,
// 3 I/O failure.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tla/analytic.hpp"
#include "tla/entropy.hpp"
#include "tla/model.hpp"
#include "tla/oracle.hpp"

using namespace tla;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double kRt2 = 0.70710678118654752;

struct Options {
  double gamma = 1.0;
  std::string scheme = "upper";
  std::string field_kind = "classical";
  double omega_re = 0.5, omega_im = 0.0;
  double g_re = 0.1, g_im = 0.0;
  double mean_photons = 100.0;
  double theta = 0.0;
  double detuning = 0.1;
  double c0_re = kRt2, c0_im = 0.0;
  double a0_re = kRt2, a0_im = 0.0;
  bool init_given = false;  // any of c0/a0 provided by config or flag

  double t_end = 50.0;
  int points = 600;

  std::string sweep = "detuning";
  double sweep_min = -5.0, sweep_max = 5.0;
  int sweep_points = 101;

  std::string out;  // empty: stdout
  std::string format = "csv";

  double bandwidth = 40.0;
  int modes = 2000;
  bool modes_given = false;
  bool quick = false;
};

// ---------------------------------------------------------------------------
// formatting

std::string fmt9(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// config file: flat "key = value" pairs, '#' comments, last key wins

const char* const kConfigKeys[] = {"gamma",   "scheme", "field_kind",   "omega_re",
                                   "omega_im", "g_re",   "g_im",         "mean_photons",
                                   "theta",    "detuning", "c0_re",      "c0_im",
                                   "a0_re",    "a0_im"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw std::invalid_argument("config key '" + key + "' has a malformed number: " + value);
  return v;
}

void apply_config(const std::string& path, Options& opt) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  " is not 'key = value': " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    bool known = false;
    for (const char* k : kConfigKeys) known = known || key == k;
    if (!known) throw std::invalid_argument("unknown config key '" + key + "'");
    if (key == "scheme") {
      opt.scheme = value;
    } else if (key == "field_kind") {
      opt.field_kind = value;
    } else {
      const double v = parse_double(key, value);
      if (key == "gamma") opt.gamma = v;
      else if (key == "omega_re") opt.omega_re = v;
      else if (key == "omega_im") opt.omega_im = v;
      else if (key == "g_re") opt.g_re = v;
      else if (key == "g_im") opt.g_im = v;
      else if (key == "mean_photons") opt.mean_photons = v;
      else if (key == "theta") opt.theta = v;
      else if (key == "detuning") opt.detuning = v;
      else if (key == "c0_re") { opt.c0_re = v; opt.init_given = true; }
      else if (key == "c0_im") { opt.c0_im = v; opt.init_given = true; }
      else if (key == "a0_re") { opt.a0_re = v; opt.init_given = true; }
      else if (key == "a0_im") { opt.a0_im = v; opt.init_given = true; }
    }
  }
}

// ---------------------------------------------------------------------------
// figure presets (ambiguous duplicate curves are not encoded)

void apply_preset(const std::string& name, Options& opt) {
  struct Preset {
    const char* scheme;
    const char* field;
    double omega, g, mean, detuning;
  };
  static const std::map<std::string, Preset> presets = {
      {"fig2a_solid", {"upper", "classical", 0.1, 0, 0, 0.1}},
      {"fig2a_dotted", {"upper", "classical", 0.2, 0, 0, 0.1}},
      {"fig2a_dashed", {"upper", "classical", 1.0, 0, 0, 0.1}},
      {"fig2b_solid", {"upper", "quantized", 0, 0.1, 100, 0.1}},
      {"fig2b_dotted", {"upper", "quantized", 0, 0.1, 4, 0.1}},
      {"fig4a_solid", {"lower", "classical", 0.1, 0, 0, 0.1}},
      {"fig4a_dotted", {"lower", "classical", 0.2, 0, 0, 0.1}},
      {"fig4a_dashed", {"lower", "classical", 1.0, 0, 0, 0.1}},
      {"fig4a_dashdot", {"lower", "classical", 0.5, 0, 0, 0.1}},
      {"fig4b_solid", {"lower", "quantized", 0, 0.1, 100, 0.1}},
      {"fig4b_dotted", {"lower", "quantized", 0, 0.1, 4, 0.1}},
      {"fig4b_dashdot", {"lower", "quantized", 0, 0.5, 100, 0.1}},
      {"fig6_solid", {"lower", "classical", 0.1, 0, 0, 0.0}},
      {"fig6_dotted", {"lower", "classical", 1.0, 0, 0, 0.0}},
      {"fig6_dashed", {"lower", "classical", 5.0, 0, 0, 0.0}},
  };
  auto it = presets.find(name);
  if (it == presets.end()) {
    std::string names;
    for (const auto& kv : presets) names += (names.empty() ? "" : ", ") + kv.first;
    throw std::invalid_argument("unknown preset '" + name + "'; available: " + names);
  }
  const Preset& p = it->second;
  opt.gamma = 1.0;
  opt.scheme = p.scheme;
  opt.field_kind = p.field;
  opt.detuning = p.detuning;
  opt.theta = 0.0;
  if (std::string(p.field) == "classical") {
    opt.omega_re = p.omega;
    opt.omega_im = 0.0;
  } else {
    opt.g_re = p.g;
    opt.g_im = 0.0;
    opt.mean_photons = p.mean;
  }
}

// ---------------------------------------------------------------------------
// resolution to physical parameters

PhysParams resolve_params(const Options& opt) {
  PhysParams p;
  p.gamma = opt.gamma;
  p.detuning = opt.detuning;
  if (opt.scheme == "upper") p.scheme = Scheme::upper;
  else if (opt.scheme == "lower") p.scheme = Scheme::lower;
  else throw std::invalid_argument("scheme must be 'upper' or 'lower', got '" + opt.scheme + "'");
  if (opt.field_kind == "classical") {
    p.field = ClassicalField{cplx(opt.omega_re, opt.omega_im)};
  } else if (opt.field_kind == "quantized") {
    p.field = QuantizedField{cplx(opt.g_re, opt.g_im), opt.mean_photons, opt.theta};
  } else {
    throw std::invalid_argument("field_kind must be 'classical' or 'quantized', got '" +
                                opt.field_kind + "'");
  }
  validate(p);
  return p;
}

InitialAtomState resolve_init(const Options& opt, const PhysParams& p) {
  InitialAtomState init{cplx(opt.c0_re, opt.c0_im), cplx(opt.a0_re, opt.a0_im)};
  if (p.scheme == Scheme::lower && !opt.init_given)
    init = InitialAtomState{cplx(0.0, 0.0), cplx(1.0, 0.0)};
  const double nrm = std::sqrt(std::norm(init.c0) + std::norm(init.a0));
  if (nrm < 1e-15)
    throw std::invalid_argument("initial amplitudes c0/a0 are both zero");
  init.c0 /= nrm;
  init.a0 /= nrm;
  validate(init);
  return init;
}

// ---------------------------------------------------------------------------
// output plumbing

int write_out(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "cannot open output file: %s\n", path.c_str());
    return 3;
  }
  out.write(content.data(), std::streamsize(content.size()));
  out.flush();
  if (!out) {
    std::fprintf(stderr, "failed writing output file: %s\n", path.c_str());
    return 3;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// trace

int run_trace(const Options& opt) {
  if (opt.points < 2) throw std::invalid_argument("points must be at least 2");
  if (!(opt.t_end > 0.0)) throw std::invalid_argument("t-end must be positive");
  if (opt.format != "csv" && opt.format != "json")
    throw std::invalid_argument("format must be 'csv' or 'json'");
  const PhysParams p = resolve_params(opt);
  const InitialAtomState init = resolve_init(opt, p);

  std::vector<double> times(std::size_t(opt.points));
  for (int i = 0; i < opt.points; ++i)
    times[std::size_t(i)] = opt.t_end * double(i) / double(opt.points - 1);
  const auto tr = entropy_trace(p, init, times);

  std::string body;
  if (opt.format == "csv") {
    body += std::string("# basis: ") + tr.basis[0] + ", " + tr.basis[1] + ", " + tr.basis[2] +
            "\n";
    body += "t_gamma,S,pop_1,pop_2,pop_3\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
      body += fmt9(p.gamma * times[i]);
      body += ',';
      body += fmt9(tr.entropy[i]);
      for (double pop : tr.populations[i]) {
        body += ',';
        body += fmt9(pop);
      }
      body += '\n';
    }
  } else {
    ordered_json j;
    j["basis"] = {tr.basis[0], tr.basis[1], tr.basis[2]};
    j["columns"] = {"t_gamma", "S", "pop_1", "pop_2", "pop_3"};
    auto rows = ordered_json::array();
    for (std::size_t i = 0; i < times.size(); ++i)
      rows.push_back({p.gamma * times[i], tr.entropy[i], tr.populations[i][0],
                      tr.populations[i][1], tr.populations[i][2]});
    j["rows"] = std::move(rows);
    body = j.dump(1) + "\n";
  }
  return write_out(opt.out, body);
}

// ---------------------------------------------------------------------------
// steady

int run_steady(const Options& opt) {
  if (opt.sweep != "detuning")
    throw std::invalid_argument("only 'detuning' sweeps are supported, got '" + opt.sweep + "'");
  if (opt.sweep_points < 1) throw std::invalid_argument("sweep-points must be at least 1");
  if (opt.sweep_min > opt.sweep_max)
    throw std::invalid_argument("sweep-min exceeds sweep-max");
  if (opt.format != "csv" && opt.format != "json")
    throw std::invalid_argument("format must be 'csv' or 'json'");

  PhysParams p = resolve_params(opt);
  if (p.scheme == Scheme::upper)
    std::fprintf(stderr,
                 "note: the upper scheme always settles into the bare ground state, so its "
                 "steady entropy is identically zero\n");

  std::vector<double> grid(std::size_t(opt.sweep_points));
  for (int i = 0; i < opt.sweep_points; ++i)
    grid[std::size_t(i)] =
        opt.sweep_points == 1
            ? opt.sweep_min
            : opt.sweep_min + (opt.sweep_max - opt.sweep_min) * double(i) /
                                  double(opt.sweep_points - 1);

  std::vector<double> entropy(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    p.detuning = grid[i];
    entropy[i] = steady_state(p).entropy;
  }

  std::string body;
  if (opt.format == "csv") {
    body += "detuning,S_infinity\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
      body += fmt9(grid[i]) + "," + fmt9(entropy[i]) + "\n";
  } else {
    ordered_json j;
    j["sweep"] = "detuning";
    j["columns"] = {"detuning", "S_infinity"};
    auto rows = ordered_json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) rows.push_back({grid[i], entropy[i]});
    j["rows"] = std::move(rows);
    body = j.dump(1) + "\n";
  }
  return write_out(opt.out, body);
}

// ---------------------------------------------------------------------------
// validate: brute-force discretized-continuum runs against the closed forms

struct CheckResult {
  std::string name;
  double max_error = 0.0;
  double threshold = 0.0;
  double norm_drift = 0.0;
  bool pass = false;
};

std::vector<double> sample_grid(double step, double horizon) {
  std::vector<double> t;
  for (double v = step; v <= horizon + 1e-12; v += step) t.push_back(v);
  return t;
}

int run_validate(const Options& opt) {
  const double horizon = opt.quick ? 5.0 : 10.0;
  const int modes = (opt.quick && !opt.modes_given) ? 1000 : opt.modes;
  // Thresholds sit 2-3x above the finite-bandwidth bias measured at W = 40,
  // N = 2000: real conjugation/sign defects overshoot them by an order of
  // magnitude or more.
  const double kUpperTol = 8e-3;
  const double kLowerTol = 2.5e-2;
  const double kQuantTol = 2e-2;
  const double kDriftTol = 1e-7;

  std::vector<CheckResult> results;

  // upper scheme, classical drive: raw amplitudes against the closed form
  {
    CheckResult r;
    r.name = "upper_classical_amplitudes";
    r.threshold = kUpperTol;
    auto bath = build_bath(1.0, opt.bandwidth, modes, 2.0 * 0.5);
    auto samples = sample_grid(0.25, horizon);
    auto tr = integrate_upper(bath, cplx(0.5, 0.0), 0.1, cplx(kRt2, 0.0), cplx(kRt2, 0.0),
                              samples, max_oracle_dt(bath));
    auto sol = make_upper_solution(1.0, 0.1, cplx(0.5, 0.0), cplx(kRt2, 0.0), cplx(kRt2, 0.0));
    for (std::size_t i = 0; i < samples.size(); ++i) {
      auto ex = sol.eval(samples[i]);
      r.max_error = std::max({r.max_error, std::abs(tr.c[i] - ex.c), std::abs(tr.a[i] - ex.a)});
    }
    r.norm_drift = tr.norm_drift;
    r.pass = r.max_error < r.threshold && r.norm_drift < kDriftTol;
    results.push_back(r);
  }

  // lower scheme, classical drive: full reduced matrix, entrywise
  {
    CheckResult r;
    r.name = "lower_classical_density";
    r.threshold = kLowerTol;
    PhysParams p;
    p.scheme = Scheme::lower;
    p.detuning = 0.1;
    p.field = ClassicalField{cplx(0.5, 0.0)};
    InitialAtomState init{cplx(0.0, 0.0), cplx(1.0, 0.0)};
    auto d = dressed_basis(p.detuning, cplx(0.5, 0.0));
    auto bath = build_bath(1.0, opt.bandwidth, modes, d.lambda1 - d.lambda2);
    auto samples = sample_grid(0.25, std::min(horizon, 5.0));
    auto tr = integrate_lower(bath, d, cplx(1.0, 0.0), samples, max_oracle_dt(bath));
    for (std::size_t i = 0; i < samples.size(); ++i) {
      auto ro = oracle_reduced_density(tr, i);
      auto ra = reduced_density(p, init, samples[i]);
      for (int e = 0; e < 9; ++e)
        r.max_error =
            std::max(r.max_error, std::abs(ro.m[std::size_t(e)] - ra.m[std::size_t(e)]));
    }
    r.norm_drift = tr.norm_drift;
    r.pass = r.max_error < r.threshold && r.norm_drift < kDriftTol;
    results.push_back(r);
  }

  // quantized drive, both schemes: photon-sector sums against closed forms
  for (auto scheme : {Scheme::upper, Scheme::lower}) {
    CheckResult r;
    r.name = scheme == Scheme::upper ? "upper_quantized_entropy" : "lower_quantized_entropy";
    r.threshold = kQuantTol;
    PhysParams p;
    p.scheme = scheme;
    p.detuning = 0.1;
    p.field = QuantizedField{cplx(0.4, 0.0), 4.0, 0.0};
    InitialAtomState init = scheme == Scheme::upper
                                ? InitialAtomState{cplx(kRt2, 0.0), cplx(kRt2, 0.0)}
                                : InitialAtomState{cplx(0.0, 0.0), cplx(1.0, 0.0)};
    auto w = coherent_weights(p.quantized());
    const double top = double(w.size());
    const double split = scheme == Scheme::upper
                             ? 2.0 * 0.4 * std::sqrt(top)
                             : std::sqrt(0.01 + 4.0 * 0.16 * (top - 1.0));
    auto bath = build_bath(1.0, opt.bandwidth, modes, split);
    auto samples = sample_grid(0.5, horizon);
    auto res = oracle_quantized_densities(p, init, bath, samples, max_oracle_dt(bath));
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double so = von_neumann_entropy(res.rho[i]);
      const double sa = von_neumann_entropy(reduced_density(p, init, samples[i]));
      r.max_error = std::max(r.max_error, std::abs(so - sa));
    }
    r.norm_drift = res.norm_drift;
    r.pass = r.max_error < r.threshold && r.norm_drift < kDriftTol;
    results.push_back(r);
  }

  ordered_json report;
  report["bandwidth"] = opt.bandwidth;
  report["modes"] = modes;
  report["horizon"] = horizon;
  report["quick"] = opt.quick;
  bool all_pass = true;
  auto checks = ordered_json::array();
  const CheckResult* worst = nullptr;
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    if (!r.pass && (!worst || r.max_error / r.threshold > worst->max_error / worst->threshold))
      worst = &r;
    checks.push_back({{"name", r.name},
                      {"max_error", r.max_error},
                      {"threshold", r.threshold},
                      {"norm_drift", r.norm_drift},
                      {"pass", r.pass}});
  }
  report["checks"] = std::move(checks);
  report["all_pass"] = all_pass;

  const int io = write_out(opt.out, report.dump(1) + "\n");
  if (io != 0) return io;
  if (!all_pass) {
    std::fprintf(stderr,
                 "validation failed; worst offender: %s (max error %.3e vs threshold %.3e). "
                 "The mode comb only mimics a flat continuum while its spacing 2W/N stays far "
                 "below gamma and the horizon stays below ~2 pi N / (2 W); increase --modes "
                 "(and --bandwidth to tighten the finite-band bias).\n",
                 worst->name.c_str(), worst->max_error, worst->threshold);
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement dynamics of a driven three-level atom and its spontaneous "
               "emission: entropy traces, steady-state sweeps and brute-force validation"};
  app.require_subcommand(1);

  Options staged;  // CLI values land here; composed onto defaults after parse
  std::string config_path, preset_name;
  std::vector<std::pair<CLI::Option*, std::function<void(Options&)>>> binds;

  auto bind = [&](CLI::App* cmd, const std::string& flags, auto Options::* member,
                  const std::string& desc) {
    CLI::Option* o = cmd->add_option(flags, staged.*member, desc);
    binds.emplace_back(o, [&staged, member](Options& opt) { opt.*member = staged.*member; });
    return o;
  };
  auto bind_flag = [&](CLI::App* cmd, const std::string& flags, bool Options::* member,
                       const std::string& desc) {
    CLI::Option* o = cmd->add_flag(flags, staged.*member, desc);
    binds.emplace_back(o, [&staged, member](Options& opt) { opt.*member = staged.*member; });
    return o;
  };

  auto add_physics = [&](CLI::App* cmd, bool with_detuning) {
    bind(cmd, "--gamma", &Options::gamma, "spontaneous decay rate (the unit scale)");
    bind(cmd, "--scheme", &Options::scheme, "coupling scheme: upper | lower");
    bind(cmd, "--field", &Options::field_kind, "drive type: classical | quantized");
    bind(cmd, "--omega", &Options::omega_re, "classical Rabi frequency, real part");
    bind(cmd, "--omega-im", &Options::omega_im, "classical Rabi frequency, imaginary part");
    bind(cmd, "--g", &Options::g_re, "vacuum coupling of the quantized drive, real part");
    bind(cmd, "--g-im", &Options::g_im, "vacuum coupling, imaginary part");
    bind(cmd, "--mean-photons", &Options::mean_photons, "coherent-state mean photon number");
    bind(cmd, "--theta", &Options::theta, "coherent-state phase");
    if (with_detuning)
      bind(cmd, "--detuning,--delta", &Options::detuning, "laser detuning from its transition");
  };
  auto add_init = [&](CLI::App* cmd) {
    auto set_init = [](Options& opt) { opt.init_given = true; };
    binds.emplace_back(bind(cmd, "--c0", &Options::c0_re,
                            "initial amplitude of the laser-coupled level, real part"),
                       set_init);
    binds.emplace_back(bind(cmd, "--c0-im", &Options::c0_im, "initial c amplitude, imaginary"),
                       set_init);
    binds.emplace_back(bind(cmd, "--a0", &Options::a0_re,
                            "initial amplitude of the decaying level, real part"),
                       set_init);
    binds.emplace_back(bind(cmd, "--a0-im", &Options::a0_im, "initial a amplitude, imaginary"),
                       set_init);
  };
  auto add_io = [&](CLI::App* cmd, bool with_format) {
    bind(cmd, "--out", &Options::out, "output path (default: standard output)");
    if (with_format) bind(cmd, "--format", &Options::format, "output format: csv | json");
    cmd->add_option("--config", config_path, "flat key = value parameter file");
    cmd->add_option("--preset", preset_name, "named figure parameter bundle");
  };

  CLI::App* trace = app.add_subcommand("trace", "entropy and populations over a time grid");
  add_physics(trace, true);
  add_init(trace);
  bind(trace, "--t-end", &Options::t_end, "end of the time grid (units of 1/gamma at gamma=1)");
  bind(trace, "--points", &Options::points, "number of grid points (inclusive endpoints)");
  add_io(trace, true);

  CLI::App* steady = app.add_subcommand("steady", "steady-state entropy swept over detuning");
  add_physics(steady, false);
  bind(steady, "--sweep", &Options::sweep, "swept parameter (only 'detuning')");
  bind(steady, "--sweep-min", &Options::sweep_min, "sweep start");
  bind(steady, "--sweep-max", &Options::sweep_max, "sweep end");
  bind(steady, "--sweep-points", &Options::sweep_points, "sweep grid size");
  add_io(steady, true);

  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "integrate a discretized emission continuum and compare to the closed forms");
  bind(validate_cmd, "--bandwidth", &Options::bandwidth, "continuum half-width W in gamma units");
  binds.emplace_back(bind(validate_cmd, "--modes", &Options::modes, "number of continuum modes"),
                     [](Options& opt) { opt.modes_given = true; });
  bind_flag(validate_cmd, "--quick", &Options::quick, "shorter horizon and N=1000 preset");
  bind(validate_cmd, "--out", &Options::out, "report path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    Options opt;  // defaults
    if (!config_path.empty()) apply_config(config_path, opt);
    if (!preset_name.empty()) apply_preset(preset_name, opt);
    for (const auto& [option, apply] : binds)
      if (option->count() > 0) apply(opt);

    if (trace->parsed()) return run_trace(opt);
    if (steady->parsed()) return run_steady(opt);
    return run_validate(opt);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
