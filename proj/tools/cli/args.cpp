#include "cli/args.hpp"

#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "mcdelay/errors.hpp"

namespace mcdelay::cli {

namespace {

struct OptionSpec {
  const char* key;
  const char* help;
};

constexpr OptionSpec kValueOptions[] = {
    {"M", "transmit antennas (figure 2: list or range a:b)"},
    {"K", "users"},
    {"power-db", "total SNR P in dB"},
    {"N", "symbols per slot"},
    {"slot-ms", "slot duration in milliseconds"},
    {"rate-bps", "arrival rate in bit/s (figure 1: comma list)"},
    {"w", "delay target(s) in slots, comma list or range a:b"},
    {"w-max", "largest delay target when --w is not given"},
    {"s", "Mellin argument(s), comma list"},
    {"theta", "effective-capacity exponent(s), comma list"},
    {"method", "exact|quadrature|alzer|alzer-lower|alzer-upper|asymptotic"},
    {"replications", "Monte Carlo replications (0 disables simulation in figures)"},
    {"horizon", "simulated slots per replication"},
    {"warmup", "discarded slots per replication (default 10% of horizon)"},
    {"seed", "master seed"},
    {"regime", "scaling regime: large-k|large-m|joint"},
    {"delta", "K/M ratio for the joint regime"},
    {"ell", "Chebyshev level in (0,1); optimized when omitted"},
    {"s-cap-factor", "stability search cap is this factor / N"},
    {"x", "normalized points for the evt command, comma list"},
};

constexpr OptionSpec kFlagOptions[] = {
    {"per-slot", "effective capacity with Mellin argument 1 - N theta"},
    {"asymptotic-verbatim", "asymptotic Mellin integral without the rho factor, raw d_K scale"},
};

}  // namespace

ParsedArgs parse_command_line(int argc, const char* const* argv) {
  CLI::App app{"Delay-violation bounds for multicast MISO downlinks"};
  app.name("mcdelay");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file with the same keys as the flags");

  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> opts;
  for (const auto& o : kValueOptions) {
    opts[o.key] = app.add_option(std::string("--") + o.key, values[o.key], o.help);
  }
  std::map<std::string, bool> flags;
  for (const auto& o : kFlagOptions) {
    flags[o.key] = false;
    opts[o.key] = app.add_flag(std::string("--") + o.key, flags[o.key], o.help);
  }
  std::string out;
  std::string format = "csv";
  app.add_option("--out", out, "output file (default: standard output)");
  app.add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  std::map<std::string, CLI::App*> subs;
  for (const char* name : {"mellin", "delay-bound", "effective-capacity", "evt", "scaling",
                           "simulate"}) {
    subs[name] = app.add_subcommand(name);
  }
  subs["mellin"]->description("Mellin transform of the service increment");
  subs["delay-bound"]->description("delay-violation bound over a range of delay targets");
  subs["effective-capacity"]->description("effective capacity R(theta)");
  subs["evt"]->description("Weibull normalization of the bottleneck gain");
  subs["scaling"]->description("large-K / large-M / joint scaling laws");
  subs["simulate"]->description("Monte Carlo fluid queue");
  int figure = 0;
  CLI::App* fig = app.add_subcommand("figure", "reproduce a figure sweep (1, 2 or 3)");
  fig->add_option("number", figure, "figure number")->required()->check(CLI::Range(1, 3));
  subs["figure"] = fig;

  ParsedArgs result;
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream os, es;
    result.exit_code = app.exit(e, os, es);
    result.message = os.str() + es.str();
    return result;
  }

  RunSpec spec;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) spec.command = parse_command(name);
  }
  spec.figure = figure;
  for (const auto& o : kValueOptions) {
    if (opts[o.key]->count() > 0) spec.params[o.key] = values[o.key];
  }
  for (const auto& o : kFlagOptions) {
    if (opts[o.key]->count() > 0) spec.params[o.key] = flags[o.key] ? "1" : "0";
  }
  spec.out = out;
  spec.format = parse_format(format);
  result.spec = std::move(spec);
  return result;
}

}  // namespace mcdelay::cli
