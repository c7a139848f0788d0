#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cli/table.hpp"

namespace mcdelay::cli {

enum class Command { Mellin, DelayBound, EffectiveCapacity, Evt, Scaling, Simulate, Figure };

std::string to_string(Command c);
Command parse_command(const std::string& name);

/// One CLI invocation. `params` maps long option names (without dashes) to
/// their raw text values; list-valued keys use commas.
struct RunSpec {
  Command command = Command::Mellin;
  int figure = 0;
  std::map<std::string, std::string> params;
  std::string out;  // empty: standard output
  Format format = Format::Csv;
};

/// Every key a RunSpec may carry.
const std::vector<std::string>& known_keys();

/// Typed, validated view of RunSpec::params with per-command defaults.
class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& raw);

  bool has(const std::string& key) const;
  /// Copy with `key` removed.
  Params without(const std::string& key) const;
  double real(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  std::int64_t integer64(const std::string& key, std::int64_t fallback) const;
  std::uint64_t unsigned64(const std::string& key, std::uint64_t fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  bool flag(const std::string& key) const;
  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<int> integers(const std::string& key, const std::vector<int>& fallback) const;

 private:
  const std::string* find(const std::string& key) const;
  std::map<std::string, std::string> raw_;
};

}  // namespace mcdelay::cli
