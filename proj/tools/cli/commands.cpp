#include "cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <variant>

#include <json.hpp>

#include "mcdelay/channel.hpp"
#include "mcdelay/errors.hpp"
#include "mcdelay/evt.hpp"
#include "mcdelay/mellin.hpp"
#include "mcdelay/queue_sim.hpp"
#include "mcdelay/snc.hpp"
#include "mcdelay/specfun.hpp"

namespace mcdelay::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Defaults {
  int antennas = 5;
  int users = 10;
  double power_db = 10.0;
  double rate_bps = 100e3;
};

struct System {
  SystemConfig cfg;
  double power_db;
  double rate_bps;
  ArrivalSpec arr;
};

System resolve_system(const Params& p, const Defaults& d) {
  const double power_db = p.real("power-db", d.power_db);
  const double slot_s = p.real("slot-ms", 2.0) * 1e-3;
  const SystemConfig cfg = SystemConfig::from_db(p.integer("M", d.antennas), p.integer("K", d.users),
                                                 power_db, p.integer("N", 100), slot_s);
  const double rate = p.real("rate-bps", d.rate_bps);
  if (!(rate > 0)) throw ConfigError("parameter 'rate-bps' must be > 0");
  return {cfg, power_db, rate, ArrivalSpec::from_rate_bps(rate, slot_s)};
}

void add_channel_params(Table& t, const SystemConfig& cfg, double power_db, bool with_antennas = true,
                        bool with_users = true) {
  if (with_antennas) t.params.emplace_back("M", std::int64_t{cfg.antennas()});
  if (with_users) t.params.emplace_back("K", std::int64_t{cfg.users()});
  t.params.emplace_back("power_db", power_db);
  t.params.emplace_back("P", cfg.power());
  if (with_antennas) t.params.emplace_back("rho", cfg.rho());
  t.params.emplace_back("N", std::int64_t{cfg.symbols_per_slot()});
  t.params.emplace_back("slot_s", cfg.slot_seconds());
}

void add_arrival_params(Table& t, const System& sys) {
  t.params.emplace_back("rate_bps", sys.rate_bps);
  t.params.emplace_back("lambda_nats_per_slot", sys.arr.lambda_nats_per_slot);
}

std::vector<MellinMethod> methods_for(const std::string& name, bool verbatim) {
  if (name == "alzer") return {MellinMethod::AlzerLower, MellinMethod::AlzerUpper};
  MellinMethod m = parse_mellin_method(name);
  if (m == MellinMethod::Asymptotic && verbatim) m = MellinMethod::AsymptoticVerbatim;
  return {m};
}

SncOptions snc_options(const Params& p) {
  SncOptions o;
  o.s_cap_factor = p.real("s-cap-factor", o.s_cap_factor);
  if (!(o.s_cap_factor > 0)) throw ConfigError("parameter 's-cap-factor' must be > 0");
  return o;
}

std::vector<int> delay_targets(const Params& p, int default_max, int first = 0) {
  const int w_max = p.integer("w-max", default_max);
  if (w_max < first) throw ConfigError("parameter 'w-max' must be >= " + std::to_string(first));
  std::vector<int> fallback;
  for (int w = first; w <= w_max; ++w) fallback.push_back(w);
  auto ws = p.integers("w", fallback);
  for (int w : ws) {
    if (w < 0) throw ConfigError("delay targets must be >= 0");
  }
  return ws;
}

struct SimSettings {
  int replications;
  std::int64_t horizon;
  std::int64_t warmup;
  std::uint64_t seed;
};

SimSettings sim_settings(const Params& p, int default_reps) {
  SimSettings s;
  s.replications = p.integer("replications", default_reps);
  s.horizon = p.integer64("horizon", 100000);
  s.warmup = p.integer64("warmup", s.horizon / 10);
  s.seed = p.unsigned64("seed", 1);
  if (s.replications < 0) throw ConfigError("parameter 'replications' must be >= 0");
  return s;
}

void add_sim_params(Table& t, const SimSettings& s) {
  t.params.emplace_back("replications", std::int64_t{s.replications});
  t.params.emplace_back("horizon", s.horizon);
  t.params.emplace_back("warmup", s.warmup);
  t.params.emplace_back("seed", static_cast<std::int64_t>(s.seed));
}

sim::SimResult run_simulation(const SystemConfig& cfg, const ArrivalSpec& arr, const SimSettings& s) {
  sim::SimConfig sc{cfg, arr};
  sc.horizon_slots = s.horizon;
  sc.warmup_slots = s.warmup;
  sc.replications = s.replications;
  sc.master_seed = s.seed;
  return sim::simulate(sc);
}

sim::ViolationPoint violation_or_zero(const sim::SimResult& r, int w) {
  if (w > r.max_delay) return {w, 0.0, 0.0};
  return sim::empirical_violation(r, w);
}

void note(std::vector<std::string>* notes, std::string text) {
  if (notes) notes->push_back(std::move(text));
}

// The exact series, or quadrature when the composition count is over budget.
MellinMethod exact_or_quadrature(const SystemConfig& cfg, std::vector<std::string>* notes) {
  const std::uint64_t terms = specfun::Compositions(cfg.users(), cfg.antennas()).count();
  if (terms > MellinOptions{}.enumeration_budget) {
    note(notes, "exact series needs " + std::to_string(terms) +
                    " composition terms; using quadrature for bound_exact");
    return MellinMethod::Quadrature;
  }
  return MellinMethod::Exact;
}

// --------------------------------------------------------------------------

Table cmd_mellin(const Params& p) {
  const System sys = resolve_system(p, {});
  const auto methods = methods_for(p.text("method", "exact"), p.flag("asymptotic-verbatim"));
  const auto ss = p.reals("s", {0.5});
  Table t;
  t.columns = {"s", "method", "value", "log_value", "est_abs_error"};
  for (double s : ss) {
    std::vector<MellinEvaluation> evals;
    if (methods.size() == 2) {
      const auto [lo, hi] = mellin_alzer_bounds(sys.cfg, s);
      evals = {lo, hi};
    } else {
      evals.push_back(MellinEvaluator(sys.cfg, methods[0])(s));
    }
    for (const auto& e : evals) {
      t.add_row({s, std::string(to_string(e.method)), e.value, e.log_value, e.est_abs_error});
    }
  }
  add_channel_params(t, sys.cfg, sys.power_db);
  return t;
}

Table cmd_delay_bound(const Params& p, std::vector<std::string>* notes) {
  const System sys = resolve_system(p, {});
  const auto methods = methods_for(p.text("method", "exact"), p.flag("asymptotic-verbatim"));
  const auto ws = delay_targets(p, 20);
  const SncOptions opts = snc_options(p);
  Table t;
  t.columns = {"w", "method", "bound", "log_bound", "s_star", "s_lo", "s_hi", "stable"};
  for (auto m : methods) {
    const DelayAnalyzer an(sys.cfg, sys.arr, m, opts);
    if (an.stability_interval().empty) {
      note(notes, "unstable configuration for method " + std::string(to_string(m)) +
                      ": bounds reported as 1");
    }
    for (const auto& r : an.delay_bounds(ws)) {
      t.add_row({std::int64_t{r.w}, std::string(to_string(m)), r.bound, r.log_bound, r.s_star,
                 r.stable_s_interval.s_lo, r.stable_s_interval.s_hi, std::int64_t{r.stable ? 1 : 0}});
    }
  }
  add_channel_params(t, sys.cfg, sys.power_db);
  add_arrival_params(t, sys);
  t.params.emplace_back("s_cap", opts.s_cap_factor / sys.cfg.symbols_per_slot());
  return t;
}

Table cmd_effective_capacity(const Params& p) {
  const System sys = resolve_system(p, {});
  const auto methods = methods_for(p.text("method", "exact"), p.flag("asymptotic-verbatim"));
  const bool per_slot = p.flag("per-slot");
  const auto thetas = p.reals("theta", {1e-3, 1e-2, 0.1, 1.0});
  const double mean = mean_service_nats(sys.cfg) / (per_slot ? 1 : sys.cfg.symbols_per_slot());
  Table t;
  t.columns = {"theta", "method", "effective_capacity", "mean_capacity"};
  for (double th : thetas) {
    for (auto m : methods) {
      t.add_row({th, std::string(to_string(m)), effective_capacity(sys.cfg, th, m, per_slot), mean});
    }
  }
  add_channel_params(t, sys.cfg, sys.power_db);
  t.params.emplace_back("unit", std::string(per_slot ? "nats/slot" : "nats/symbol"));
  return t;
}

Table cmd_evt(const Params& p) {
  const int m = p.integer("M", 5);
  const int k = p.integer("K", 10);
  const SystemConfig cfg(m, k, db_to_linear(p.real("power-db", 10.0)));
  const auto params = evt::weibull_params(m, k);
  Table t;
  if (!p.has("x")) {
    t.columns = {"c", "d", "kappa", "weibull_mean", "weibull_variance", "exact_mean"};
    t.add_row({params.c_K, params.d_K, std::int64_t{params.kappa}, evt::weibull_mean(m, k),
               evt::weibull_variance(m, k), evt::exact_min_gain_mean(cfg) / m});
  } else {
    t.columns = {"x", "limit_cdf", "exact_cdf", "abs_diff", "error_bound"};
    for (double x : p.reals("x", {})) {
      if (x < 0) throw ConfigError("evt points must be >= 0");
      const double lim = evt::limit_cdf(m, x);
      const double ex = evt::normalized_min_gain_cdf(cfg, x);
      t.add_row({x, lim, ex, std::abs(lim - ex), evt::evt_error_bound(m, k, x)});
    }
    t.params.emplace_back("c", params.c_K);
    t.params.emplace_back("d", params.d_K);
    t.params.emplace_back("kappa", std::int64_t{params.kappa});
  }
  t.params.emplace_back("M", std::int64_t{m});
  t.params.emplace_back("K", std::int64_t{k});
  t.params.emplace_back("scale", std::string("normalized gain X/M"));
  return t;
}

Table cmd_scaling(const Params& p) {
  const System sys = resolve_system(p, {});
  const auto kind = evt::parse_regime(p.text("regime", "large-k"));
  const auto ss = p.reals("s", {0.5});
  Table t;
  t.columns = {"s", "regime", "value", "lower", "upper", "ell", "mellin_quadrature"};
  for (double s : ss) {
    const double q = mellin_quadrature(sys.cfg, s).value;
    if (kind != evt::RegimeKind::Joint) {
      const evt::ScalingRegime r{kind, 0.0, 0.5};
      const double v = std::get<double>(evt::scaling_limit(r, sys.cfg, s));
      t.add_row({s, std::string(evt::to_string(kind)), v, kNaN, kNaN, kNaN, q});
      continue;
    }
    const double delta = p.real("delta", static_cast<double>(sys.cfg.users()) / sys.cfg.antennas());
    double ell;
    if (p.has("ell")) {
      ell = p.real("ell", 0.5);
    } else {
      ell = evt::maximize_joint_lower_bound(delta, sys.cfg.power(), s).ell;
    }
    const auto b = std::get<evt::ScalingBounds>(
        evt::scaling_limit(evt::ScalingRegime::joint(delta, ell), sys.cfg, s));
    t.add_row({s, std::string(evt::to_string(kind)), kNaN, b.lower, b.upper, ell, q});
  }
  add_channel_params(t, sys.cfg, sys.power_db);
  return t;
}

Table cmd_simulate(const Params& p) {
  const System sys = resolve_system(p, {});
  const SimSettings s = sim_settings(p, 20);
  if (s.replications < 1) throw ConfigError("parameter 'replications' must be >= 1");
  const auto r = run_simulation(sys.cfg, sys.arr, s);
  std::vector<int> fallback;
  for (int w = 0; w <= r.max_delay; ++w) fallback.push_back(w);
  Table t;
  t.columns = {"w", "p_hat", "std_error"};
  for (int w : p.integers("w", fallback)) {
    if (w < 0) throw ConfigError("delay targets must be >= 0");
    const auto v = violation_or_zero(r, w);
    t.add_row({std::int64_t{w}, v.p_hat, v.std_error});
  }
  add_channel_params(t, sys.cfg, sys.power_db);
  add_arrival_params(t, sys);
  add_sim_params(t, s);
  t.params.emplace_back("effective_lambda", r.effective_lambda);
  t.params.emplace_back("mean_service", r.mean_service);
  t.params.emplace_back("mean_service_stderr", r.mean_service_stderr);
  t.params.emplace_back("mean_backlog", r.mean_backlog);
  t.params.emplace_back("max_delay", std::int64_t{r.max_delay});
  t.params.emplace_back("censored", r.censored);
  return t;
}

// --------------------------------------------------------------------------

Table figure1(const Params& p, std::vector<std::string>* notes) {
  const System base = resolve_system(p, {5, 10, 10.0, 100e3});
  const auto rates = p.reals("rate-bps", {90e3, 100e3, 110e3});
  const auto ws = delay_targets(p, 20, 1);
  const SimSettings s = sim_settings(p, 20);
  const SncOptions opts = snc_options(p);
  SncOptions alzer_opts = opts;
  alzer_opts.mellin.alzer_integral_fallback = true;
  const MellinMethod exact = exact_or_quadrature(base.cfg, notes);

  Table t;
  t.columns = {"rate_bps", "lambda_nats_per_slot", "w", "bound_exact", "bound_alzer_lower",
               "bound_alzer_upper", "sim_p_hat", "sim_stderr"};
  for (double rate : rates) {
    if (!(rate > 0)) throw ConfigError("parameter 'rate-bps' must be > 0");
    const ArrivalSpec arr = ArrivalSpec::from_rate_bps(rate, base.cfg.slot_seconds());
    const DelayAnalyzer ex(base.cfg, arr, exact, opts);
    const DelayAnalyzer lo(base.cfg, arr, MellinMethod::AlzerLower, alzer_opts);
    const DelayAnalyzer hi(base.cfg, arr, MellinMethod::AlzerUpper, alzer_opts);
    if (ex.stability_interval().empty) {
      note(notes, "rate " + format_cell(rate) + " bit/s is unstable: bounds reported as 1");
    }
    const auto be = ex.delay_bounds(ws);
    const auto bl = lo.delay_bounds(ws);
    const auto bh = hi.delay_bounds(ws);
    sim::SimResult sr;
    if (s.replications > 0) sr = run_simulation(base.cfg, arr, s);
    for (std::size_t i = 0; i < ws.size(); ++i) {
      double ph = kNaN, se = kNaN;
      if (s.replications > 0) {
        const auto v = violation_or_zero(sr, ws[i]);
        ph = v.p_hat;
        se = v.std_error;
      }
      t.add_row({rate, arr.lambda_nats_per_slot, std::int64_t{ws[i]}, be[i].bound, bl[i].bound,
                 bh[i].bound, ph, se});
    }
  }
  add_channel_params(t, base.cfg, base.power_db);
  add_sim_params(t, s);
  t.params.emplace_back("exact_method", std::string(to_string(exact)));
  return t;
}

Table figure2(const Params& p, std::vector<std::string>* notes) {
  const System base = resolve_system(p.without("M"), {1, 2, 10.0, 100e3});
  const auto antennas = p.integers("M", {1, 2, 3, 4, 5, 6, 7, 8});
  const int w = p.integers("w", {3}).front();
  if (w < 0) throw ConfigError("delay targets must be >= 0");
  const SimSettings s = sim_settings(p, 20);
  const SncOptions opts = snc_options(p);
  const auto requested = methods_for(p.text("method", "exact"), p.flag("asymptotic-verbatim"));
  if (requested.size() != 1) throw ConfigError("figure 2 needs a single Mellin method");

  Table t;
  t.columns = {"M", "rho", "bound", "stable", "method", "sim_p_hat", "sim_stderr"};
  for (int m : antennas) {
    const SystemConfig cfg = base.cfg.with_antennas(m);
    MellinMethod method = requested[0];
    if (method == MellinMethod::Exact) method = exact_or_quadrature(cfg, notes);
    const auto r = DelayAnalyzer(cfg, base.arr, method, opts).delay_bound(w);
    if (!r.stable) note(notes, "M=" + std::to_string(m) + " is unstable: bound reported as 1");
    double ph = kNaN, se = kNaN;
    if (s.replications > 0) {
      const auto v = violation_or_zero(run_simulation(cfg, base.arr, s), w);
      ph = v.p_hat;
      se = v.std_error;
    }
    t.add_row({std::int64_t{m}, cfg.rho(), r.bound, std::int64_t{r.stable ? 1 : 0},
               std::string(to_string(method)), ph, se});
  }
  t.params.emplace_back("K", std::int64_t{base.cfg.users()});
  add_channel_params(t, base.cfg, base.power_db, false, false);
  add_arrival_params(t, base);
  t.params.emplace_back("w", std::int64_t{w});
  add_sim_params(t, s);
  return t;
}

Table figure3(const Params& p, std::vector<std::string>* notes) {
  const System sys = resolve_system(p, {10, 100, 1.0, 7.2e3});
  const auto ws = delay_targets(p, 10);
  const SimSettings s = sim_settings(p, 20);
  const SncOptions opts = snc_options(p);
  const MellinMethod exact = exact_or_quadrature(sys.cfg, notes);
  const MellinMethod asym =
      p.flag("asymptotic-verbatim") ? MellinMethod::AsymptoticVerbatim : MellinMethod::Asymptotic;
  const DelayAnalyzer ex(sys.cfg, sys.arr, exact, opts);
  const DelayAnalyzer as(sys.cfg, sys.arr, asym, opts);
  if (as.stability_interval().empty) {
    note(notes, "asymptotic service is unstable at this rate: bound_asymptotic reported as 1");
  }
  const auto be = ex.delay_bounds(ws);
  const auto ba = as.delay_bounds(ws);
  sim::SimResult sr;
  if (s.replications > 0) sr = run_simulation(sys.cfg, sys.arr, s);
  Table t;
  t.columns = {"w", "bound_exact", "bound_asymptotic", "sim_p_hat", "sim_stderr"};
  for (std::size_t i = 0; i < ws.size(); ++i) {
    double ph = kNaN, se = kNaN;
    if (s.replications > 0) {
      const auto v = violation_or_zero(sr, ws[i]);
      ph = v.p_hat;
      se = v.std_error;
    }
    t.add_row({std::int64_t{ws[i]}, be[i].bound, ba[i].bound, ph, se});
  }
  add_channel_params(t, sys.cfg, sys.power_db);
  add_arrival_params(t, sys);
  add_sim_params(t, s);
  t.params.emplace_back("exact_method", std::string(to_string(exact)));
  t.params.emplace_back("asymptotic_method", std::string(to_string(asym)));
  return t;
}

struct ErrorInfo {
  const char* kind;
  int code;
};

ErrorInfo classify(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return {"config", kExitConfig};
  if (dynamic_cast<const BudgetExceededError*>(&e)) return {"budget-exceeded", kExitNumerical};
  if (dynamic_cast<const PrecisionLossError*>(&e)) return {"precision-loss", kExitNumerical};
  if (dynamic_cast<const NonConvergenceError*>(&e)) return {"non-convergence", kExitNumerical};
  if (dynamic_cast<const OverflowError*>(&e)) return {"overflow", kExitNumerical};
  if (dynamic_cast<const InstabilityError*>(&e)) return {"instability", kExitNumerical};
  if (dynamic_cast<const DomainError*>(&e)) return {"domain", kExitConfig};
  if (dynamic_cast<const std::ios_base::failure*>(&e)) return {"io", kExitIo};
  return {"internal", kExitFailure};
}

void report(std::ostream& diag, const char* level, const std::string& kind, const std::string& msg) {
  nlohmann::ordered_json j;
  j["level"] = level;
  j["kind"] = kind;
  j["message"] = msg;
  diag << j.dump() << '\n';
}

}  // namespace

Table execute(const RunSpec& spec, std::vector<std::string>* notes) {
  const Params p(spec.params);
  Table t;
  switch (spec.command) {
    case Command::Mellin: t = cmd_mellin(p); break;
    case Command::DelayBound: t = cmd_delay_bound(p, notes); break;
    case Command::EffectiveCapacity: t = cmd_effective_capacity(p); break;
    case Command::Evt: t = cmd_evt(p); break;
    case Command::Scaling: t = cmd_scaling(p); break;
    case Command::Simulate: t = cmd_simulate(p); break;
    case Command::Figure:
      switch (spec.figure) {
        case 1: t = figure1(p, notes); break;
        case 2: t = figure2(p, notes); break;
        case 3: t = figure3(p, notes); break;
        default: throw ConfigError("figure must be 1, 2 or 3");
      }
      break;
  }
  t.command = to_string(spec.command);
  if (spec.command == Command::Figure) t.command += " " + std::to_string(spec.figure);
  return t;
}

int run(const RunSpec& spec, std::ostream& stdout_stream, std::ostream& diag) {
  try {
    std::vector<std::string> notes;
    const Table t = execute(spec, &notes);
    for (const auto& n : notes) report(diag, "warning", "note", n);
    const std::string text = render(t, spec.format);
    if (spec.out.empty()) {
      stdout_stream << text;
      stdout_stream.flush();
    } else {
      std::ofstream f(spec.out, std::ios::binary | std::ios::trunc);
      if (!f) throw std::ios_base::failure("cannot open '" + spec.out + "' for writing");
      f << text;
      f.close();
      if (!f) throw std::ios_base::failure("write to '" + spec.out + "' failed");
    }
    return kExitOk;
  } catch (const std::exception& e) {
    const auto info = classify(e);
    report(diag, "error", info.kind, e.what());
    return info.code;
  }
}

}  // namespace mcdelay::cli
