// aimdfluid: classify, sweep, size and simulate the AIMD / Drop-Tail fluid model.
//
// Exit codes: 0 ok, 2 invalid input, 3 infeasible constraint, 4 numerical failure.

#include <openssl/evp.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "aimd/buffer_sizing.hpp"
#include "aimd/classifier.hpp"
#include "aimd/limit_map.hpp"
#include "aimd/pareto.hpp"
#include "aimd/roots.hpp"
#include "aimd/simulator.hpp"

#ifndef AIMD_VERSION
#define AIMD_VERSION "0.0.0"
#endif

using json = nlohmann::ordered_json;
using namespace aimd;

namespace {

struct CliError : std::runtime_error {
  int code;
  std::string kind;
  CliError(int c, std::string k, const std::string& msg)
      : std::runtime_error(msg), code(c), kind(std::move(k)) {}
};

[[noreturn]] void invalid(const std::string& msg) { throw CliError(2, "invalid_params", msg); }

// ---------------------------------------------------------------- output

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, md, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& data) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw CliError(2, "io_error", "cannot write " + tmp.string());
    f << data;
    if (!f.flush()) throw CliError(2, "io_error", "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw CliError(2, "io_error", "cannot move output into " + path + ": " + ec.message());
  }
}

struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;  // path ("-" for stdout), digest

  void emit(const std::string& path, const std::string& data) {
    if (path.empty() || path == "-") {
      std::cout << data << std::flush;
      files.emplace_back("-", sha256_hex(data));
    } else {
      write_atomic(path, data);
      files.emplace_back(path, sha256_hex(data));
    }
  }
};

std::string fmt12(double x) {
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json ext(const Extended& e) {
  if (e.is_infinite()) return "+inf";
  return e.value();
}

json opt(const std::optional<double>& x) {
  if (x) return *x;
  return nullptr;
}

int thread_count() {
  if (const char* env = std::getenv("AIMD_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
    std::cerr << "note: ignoring AIMD_THREADS=" << env << " (expected a positive integer)\n";
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// ---------------------------------------------------------------- parameters

struct ParamInput {
  std::optional<double> beta, q, b;          // normalized
  std::optional<double> mu, rtt, m, buffer;  // physical
};

void add_param_options(CLI::App* cmd, ParamInput& in) {
  cmd->add_option("--beta", in.beta, "multiplicative decrease factor, in [0.01, 0.99]")->required();
  cmd->add_option("--q", in.q, "normalized pipe size mu T / m");
  cmd->add_option("--b", in.b, "normalized buffer B / m");
  cmd->add_option("--mu", in.mu, "bottleneck capacity (unit per second)");
  cmd->add_option("--rtt", in.rtt, "propagation round-trip time T, seconds");
  cmd->add_option("--m", in.m, "aggregate additive increase per RTT (unit)");
  cmd->add_option("--buffer", in.buffer, "buffer size B (unit)");
}

void check_beta(double beta) {
  if (!(beta >= 0.01 && beta <= 0.99)) invalid("beta must lie in [0.01, 0.99]");
}

struct Resolved {
  NormalizedParams normalized;
  std::optional<FluidParams> physical;
};

Resolved resolve(const ParamInput& in, Unit unit) {
  check_beta(*in.beta);
  const bool any_norm = in.q || in.b;
  const bool any_phys = in.mu || in.rtt || in.m || in.buffer;
  if (any_norm && any_phys) invalid("give either --q/--b or --mu/--rtt/--m/--buffer, not both");
  Resolved r;
  try {
    if (any_phys) {
      if (!(in.mu && in.rtt && in.m && in.buffer)) {
        invalid("physical parameters need all of --mu, --rtt, --m, --buffer");
      }
      FluidParams p{*in.mu, *in.rtt, *in.m, *in.buffer, *in.beta, unit};
      r.normalized = normalize(p);
      r.physical = p;
    } else {
      if (!(in.q && in.b)) invalid("normalized parameters need both --q and --b");
      r.normalized = NormalizedParams{*in.beta, *in.q, *in.b};
      r.normalized.validate();
    }
  } catch (const std::invalid_argument& e) {
    invalid(e.what());
  }
  return r;
}

json params_json(const Resolved& r, Unit unit) {
  json j;
  j["beta"] = r.normalized.beta;
  j["q"] = r.normalized.q;
  j["b"] = r.normalized.b;
  j["unit"] = to_string(unit);
  if (r.physical) {
    j["physical"] = {{"mu", r.physical->mu},
                     {"rtt", r.physical->T},
                     {"m", r.physical->m},
                     {"buffer", r.physical->B}};
  }
  return j;
}

json cycle_json(const CycleDescriptor& c) {
  return json{{"order", c.order},     {"shape", to_string(c.shape)}, {"v0", c.v0},
              {"s1", c.s1},           {"s0", opt(c.s0)},             {"y_min", c.y_min},
              {"S_cycle", c.S_cycle}, {"slide", c.slide}};
}

json int_keyed(const std::map<int, double>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[std::to_string(k)] = v;
  return j;
}

json int_keyed(const std::map<int, Extended>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[std::to_string(k)] = ext(v);
  return j;
}

json tolerances_json() {
  const roots::Tolerance t;
  return json{{"root_x_abs", t.x_abs},
              {"root_f_abs", t.f_abs},
              {"root_max_iter", t.max_iter},
              {"critical", kCriticalTolerance},
              {"double_root_window", kDoubleRootWindow},
              {"csv_significant_digits", 12}};
}

// ---------------------------------------------------------------- commands

struct Common {
  std::string unit = "packets";
  std::string manifest;
  std::optional<long long> seed;
  std::string out;
};

json run_classify(const ParamInput& in, Unit unit, Outputs& outs, const std::string& out) {
  const Resolved r = resolve(in, unit);
  const ClassificationReport rep = classify(r.normalized);
  const DerivedConstants& c = rep.constants;
  json j;
  j["params"] = params_json(r, unit);
  j["constants"] = json{{"N", c.N},
                        {"D", c.D},
                        {"C", c.C},
                        {"theta", int_keyed(c.theta)},
                        {"b0", int_keyed(c.b0)},
                        {"tau", int_keyed(c.tau)},
                        {"A_star", int_keyed(c.A_star)},
                        {"q_star", int_keyed(c.q_star)},
                        {"b_lo", opt(c.b_lo)},
                        {"b_hi", opt(c.b_hi)}};
  j["case"] = to_string(rep.case_tag);
  j["cycles"] = json::array();
  for (const auto& cy : rep.cycles) j["cycles"].push_back(cycle_json(cy));
  j["single_jump_only"] = rep.single_jump_only;
  j["single_jump_condition"] = to_string(rep.single_jump_condition);
  j["cap_binds"] = rep.cap_binds;
  j["notes"] = rep.notes;
  outs.emit(out, j.dump(2) + "\n");
  return j["params"];
}

struct ParetoArgs {
  double mu = 0, rtt = 0, m = 0, beta = 0;
  double b_min = 0, b_max = 0;
  int points = 0;
  bool log_grid = false;
  bool empirical = false;
  std::string constraint;
};

struct Constraint {
  bool on_goodput = true;  // gbar >= value, else xbar <= value
  double value = 0.0;
};

Constraint parse_constraint(const std::string& text, double mu) {
  static const std::regex g(R"(\s*gbar\s*>=\s*([0-9.eE+-]+)\s*(mu)?\s*)");
  static const std::regex x(R"(\s*xbar\s*<=\s*([0-9.eE+-]+)\s*)");
  std::smatch mt;
  try {
    if (std::regex_match(text, mt, g)) {
      const double v = std::stod(mt[1].str());
      return {true, mt[2].matched ? v * mu : v};
    }
    if (std::regex_match(text, mt, x)) return {false, std::stod(mt[1].str())};
  } catch (const std::exception&) {
  }
  invalid("constraint must look like 'gbar>=X', 'gbar>=Xmu' or 'xbar<=Y'");
}

json run_pareto(const ParetoArgs& a, Unit unit, Outputs& outs, const std::string& out) {
  check_beta(a.beta);
  if (a.points < 1) invalid("empty grid: --points must be at least 1");
  if (!(a.b_min >= 0.0) || !(a.b_max >= a.b_min)) invalid("empty grid: need 0 <= b-min <= b-max");
  if (a.log_grid && a.b_min <= 0.0) invalid("--log needs b-min > 0");
  const FluidParams p{a.mu, a.rtt, a.m, 0.0, a.beta, unit};
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    invalid(e.what());
  }

  bool empirical = a.empirical;
  if (!empirical && !closed_form_applies(p)) {
    std::cerr << "note: mu T / m is not above A*_2; closed forms do not apply, using "
                 "simulator averages (regime=empirical)\n";
    empirical = true;
  }

  std::vector<double> grid;
  for (int i = 0; i < a.points; ++i) {
    const double t = a.points == 1 ? 0.0 : static_cast<double>(i) / (a.points - 1);
    grid.push_back(a.log_grid ? a.b_min * std::pow(a.b_max / a.b_min, t)
                              : a.b_min + (a.b_max - a.b_min) * t);
  }
  const bool has_knee = closed_form_applies(p);
  const double knee = has_knee ? knee_buffer(p) : 0.0;
  const bool knee_in_range = has_knee && knee >= a.b_min && knee <= a.b_max;
  if (knee_in_range) grid.push_back(knee);

  ParetoSet set = pareto_sweep(p, grid, empirical, thread_count());

  std::optional<ParetoPoint> optimum;
  if (!a.constraint.empty()) {
    const Constraint c = parse_constraint(a.constraint, p.mu);
    if (!empirical) {
      optimum = c.on_goodput ? min_delay_given_goodput(p, c.value, a.b_max)
                             : max_goodput_given_delay(p, c.value, a.b_max);
    } else {
      for (const auto& pt : set.points) {
        const bool ok = c.on_goodput ? pt.g_bar >= c.value : pt.x_bar <= c.value;
        if (!ok) continue;
        const bool better = !optimum || (c.on_goodput ? pt.x_bar < optimum->x_bar
                                                      : pt.g_bar > optimum->g_bar);
        if (better) optimum = pt;
      }
    }
    if (!optimum) {
      std::ostringstream os;
      os << "no buffer in [0, " << fmt12(a.b_max) << "] satisfies " << a.constraint;
      if (c.on_goodput && c.value > p.mu) os << " (goodput cannot exceed mu = " << fmt12(p.mu) << ")";
      throw CliError(3, "infeasible", os.str());
    }
  }

  std::ostringstream csv;
  csv << "B,lambda_bar,g_bar,x_bar,T_cycle,regime,tag\n";
  auto row = [&](const ParetoPoint& pt, const char* tag) {
    csv << fmt12(pt.B) << ',' << fmt12(pt.lambda_bar) << ',' << fmt12(pt.g_bar) << ','
        << fmt12(pt.x_bar) << ',' << fmt12(pt.T_cycle) << ',' << to_string(pt.regime) << ','
        << tag << '\n';
  };
  bool knee_done = false;
  for (const auto& pt : set.points) {
    const bool is_knee = knee_in_range && !knee_done && pt.B == knee;
    knee_done = knee_done || is_knee;
    row(pt, is_knee ? "knee" : "");
  }
  if (optimum) row(*optimum, "optimum");
  outs.emit(out, csv.str());

  json j{{"mu", a.mu},         {"rtt", a.rtt},       {"m", a.m},
         {"beta", a.beta},     {"b_min", a.b_min},   {"b_max", a.b_max},
         {"points", a.points}, {"log", a.log_grid},  {"empirical", empirical},
         {"unit", to_string(unit)}};
  if (has_knee) j["knee_B"] = knee;
  if (!a.constraint.empty()) j["constraint"] = a.constraint;
  return j;
}

struct BminArgs {
  double mu = 0, rtt = 0, beta = 0;
  std::string m_range;
  int samples = 200;
  std::optional<double> m0;
};

json run_bmin(const BminArgs& a, Unit unit, Outputs& outs, const std::string& out) {
  check_beta(a.beta);
  const auto colon = a.m_range.find(':');
  if (colon == std::string::npos) invalid("--m-range must look like lo:hi");
  double lo = 0, hi = 0;
  try {
    lo = std::stod(a.m_range.substr(0, colon));
    hi = std::stod(a.m_range.substr(colon + 1));
  } catch (const std::exception&) {
    invalid("--m-range must look like lo:hi");
  }
  if (a.m0) {
    if (!(*a.m0 > 0.0)) invalid("--m0 must be positive");
    lo *= *a.m0;
    hi *= *a.m0;
  }
  if (!(a.mu > 0.0) || !(a.rtt > 0.0)) invalid("--mu and --rtt must be positive");
  BufferCurve curve;
  try {
    curve = buffer_curve(a.mu * a.rtt, a.beta, lo, hi, a.samples, thread_count());
  } catch (const std::invalid_argument& e) {
    invalid(e.what());
  }
  std::ostringstream csv;
  csv << (a.m0 ? "n," : "") << "m,N,B0,envelope\n";
  for (const auto& s : curve.samples) {
    if (a.m0) csv << fmt12(s.m / *a.m0) << ',';
    csv << fmt12(s.m) << ',' << s.N << ',' << fmt12(s.B0) << ',' << fmt12(s.envelope) << '\n';
  }
  outs.emit(out, csv.str());
  json j{{"mu", a.mu},           {"rtt", a.rtt},         {"beta", a.beta},
         {"m_range", a.m_range}, {"samples", a.samples}, {"unit", to_string(unit)}};
  if (a.m0) j["m0"] = *a.m0;
  return j;
}

struct SimArgs {
  std::optional<double> v_init;
  double y_init = 0.0;
  int cycles = 200000;
  int measure = 3;
  std::string trace;
  int trace_samples = 16;
};

json run_simulate(const ParamInput& in, const SimArgs& a, Unit unit, Outputs& outs,
                  const std::string& out) {
  const Resolved r = resolve(in, unit);
  const NormalizedParams& np = r.normalized;
  SimConfig cfg = normalized_config(np, a.v_init.value_or(np.beta * np.A()), a.y_init);
  if (r.physical) cfg.params = *r.physical;
  cfg.max_cycles = a.cycles;
  cfg.measure_cycles = a.measure;
  cfg.record_trace = !a.trace.empty();
  cfg.trace_samples = a.trace_samples;
  if (a.cycles < 1 || a.measure < 1 || a.trace_samples < 1) {
    invalid("--cycles, --measure and --trace-samples must be positive");
  }
  SimResult res;
  try {
    res = run(cfg);
  } catch (const std::invalid_argument& e) {
    invalid(e.what());
  } catch (const ConvergenceError& e) {
    throw CliError(4, "no_convergence", e.what());
  }

  if (!a.trace.empty()) {
    std::ostringstream csv;
    csv << "t,s,v,y,event\n";
    for (const auto& e : res.trace) {
      csv << fmt12(e.t) << ',' << fmt12(e.s) << ',' << fmt12(e.v) << ',' << fmt12(e.y) << ','
          << e.event << '\n';
    }
    outs.emit(a.trace, csv.str());
  }

  json j;
  j["params"] = params_json(r, unit);
  j["v_init"] = cfg.v_init;
  j["y_init"] = cfg.y_init;
  j["limit_cycle"] = res.limit_cycle ? cycle_json(*res.limit_cycle) : json(nullptr);
  j["lambda_bar"] = res.lambda_bar;
  j["g_bar"] = res.g_bar;
  j["x_bar"] = res.x_bar;
  j["T_cycle"] = res.T_cycle_measured;
  j["cycles_run"] = res.cycles_run;
  json mult = json::object();
  for (const auto& [k, n] : res.jump_multiplicities) mult[std::to_string(k)] = n;
  j["jump_multiplicities"] = mult;
  outs.emit(out, j.dump(2) + "\n");
  json echo = j["params"];
  echo["v_init"] = cfg.v_init;
  echo["y_init"] = cfg.y_init;
  echo["cycles"] = a.cycles;
  echo["measure"] = a.measure;
  return echo;
}

std::string command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

void error_json(const std::string& kind, const std::string& msg) {
  std::cerr << json{{"error", kind}, {"message", msg}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fluid model of AIMD congestion control over a Drop-Tail buffer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", AIMD_VERSION);

  Common common;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--unit", common.unit, "data unit for mu, m and buffers")
        ->check(CLI::IsMember({"packets", "bits"}));
    cmd->add_option("--manifest", common.manifest, "write a run manifest (JSON) to this path");
    cmd->add_option("--seed", common.seed, "accepted for harness compatibility; unused");
    cmd->add_option("--out,-o", common.out, "output file (default stdout)");
  };

  ParamInput cls_in;
  CLI::App* cls = app.add_subcommand("classify", "limit cycles and constants as JSON");
  add_param_options(cls, cls_in);
  add_common(cls);

  ParetoArgs par;
  CLI::App* pareto = app.add_subcommand("pareto", "goodput / queue trade-off over a buffer grid (CSV)");
  pareto->add_option("--mu", par.mu, "capacity (unit per second)")->required();
  pareto->add_option("--rtt", par.rtt, "propagation RTT, seconds")->required();
  pareto->add_option("--m", par.m, "aggregate additive increase per RTT (unit)")->required();
  pareto->add_option("--beta", par.beta, "multiplicative decrease factor")->required();
  pareto->add_option("--b-min", par.b_min, "smallest buffer (unit)")->required();
  pareto->add_option("--b-max", par.b_max, "largest buffer (unit)")->required();
  pareto->add_option("--points", par.points, "grid size")->required();
  pareto->add_flag("--log", par.log_grid, "log-spaced grid");
  pareto->add_flag("--empirical", par.empirical, "use simulator averages instead of closed forms");
  pareto->add_option("--constraint", par.constraint, "gbar>=X, gbar>=Xmu or xbar<=Y");
  add_common(pareto);

  BminArgs bm;
  CLI::App* bmin = app.add_subcommand("bmin", "smallest full-utilisation buffer against m (CSV)");
  bmin->add_option("--mu", bm.mu, "capacity (unit per second)")->required();
  bmin->add_option("--rtt", bm.rtt, "propagation RTT, seconds")->required();
  bmin->add_option("--beta", bm.beta, "multiplicative decrease factor")->required();
  bmin->add_option("--m-range", bm.m_range, "lo:hi range of m (or of n with --m0)")->required();
  bmin->add_option("--samples", bm.samples, "log-spaced samples");
  bmin->add_option("--m0", bm.m0, "per-connection increase; --m-range is then a connection count");
  add_common(bmin);

  ParamInput sim_in;
  SimArgs sa;
  CLI::App* sim = app.add_subcommand("simulate", "event-driven run to the limit cycle (JSON)");
  add_param_options(sim, sim_in);
  sim->add_option("--v-init", sa.v_init, "initial normalized window W/m (default beta A)");
  sim->add_option("--y-init", sa.y_init, "initial normalized queue x/m");
  sim->add_option("--cycles", sa.cycles, "cycle budget before giving up");
  sim->add_option("--measure", sa.measure, "whole cycles averaged after convergence");
  sim->add_option("--trace", sa.trace, "write the trajectory as CSV");
  sim->add_option("--trace-samples", sa.trace_samples, "samples per free segment in the trace");
  add_common(sim);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_json("invalid_params", e.what());
    return 2;
  }

  try {
    const Unit unit = unit_from_string(common.unit);
    if (common.seed) std::cerr << "note: --seed ignored, the model is deterministic\n";
    Outputs outs;
    json params;
    std::string name;
    if (*cls) {
      name = "classify";
      params = run_classify(cls_in, unit, outs, common.out);
    } else if (*pareto) {
      name = "pareto";
      params = run_pareto(par, unit, outs, common.out);
    } else if (*bmin) {
      name = "bmin";
      params = run_bmin(bm, unit, outs, common.out);
    } else {
      name = "simulate";
      params = run_simulate(sim_in, sa, unit, outs, common.out);
    }
    if (!common.manifest.empty()) {
      json m;
      m["command"] = command_line(argc, argv);
      m["subcommand"] = name;
      m["params"] = params;
      m["version"] = AIMD_VERSION;
      m["tolerances"] = tolerances_json();
      m["threads"] = thread_count();
      if (common.seed) m["seed_ignored"] = *common.seed;
      m["outputs"] = json::array();
      for (const auto& [path, digest] : outs.files) {
        m["outputs"].push_back({{"path", path}, {"sha256", digest}});
      }
      write_atomic(common.manifest, m.dump(2) + "\n");
    }
  } catch (const CliError& e) {
    error_json(e.kind, e.what());
    return e.code;
  } catch (const std::invalid_argument& e) {
    error_json("invalid_params", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    error_json("invalid_params", e.what());
    return 2;
  } catch (const std::exception& e) {
    error_json("numerical_failure", e.what());
    return 4;
  }
  return 0;
}
