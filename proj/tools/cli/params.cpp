#include "cli/params.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "mcdelay/errors.hpp"

namespace mcdelay::cli {

namespace {

const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> names = {
      {"mellin", Command::Mellin},
      {"delay-bound", Command::DelayBound},
      {"effective-capacity", Command::EffectiveCapacity},
      {"evt", Command::Evt},
      {"scaling", Command::Scaling},
      {"simulate", Command::Simulate},
      {"figure", Command::Figure},
  };
  return names;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(d)) {
    throw ConfigError("parameter '" + key + "': '" + v + "' is not a finite number");
  }
  return d;
}

long long to_integer(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long long n = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE) {
    // Accept integral values written in floating-point form, e.g. 1e5.
    const double d = to_real(key, v);
    if (d != std::floor(d) || std::abs(d) > 9.0e15) {
      throw ConfigError("parameter '" + key + "': '" + v + "' is not an integer");
    }
    return static_cast<long long>(d);
  }
  return n;
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [name, cmd] : command_names()) {
    if (cmd == c) return name;
  }
  return "unknown";
}

Command parse_command(const std::string& name) {
  const auto it = command_names().find(name);
  if (it == command_names().end()) throw ConfigError("unknown command '" + name + "'");
  return it->second;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "M",         "K",          "power-db",  "N",      "slot-ms", "rate-bps",
      "w",         "w-max",      "s",         "theta",  "method",  "replications",
      "horizon",   "warmup",     "seed",      "regime", "delta",   "ell",
      "per-slot",  "asymptotic-verbatim", "s-cap-factor", "x",
  };
  return keys;
}

Params::Params(const std::map<std::string, std::string>& raw) : raw_(raw) {
  const auto& keys = known_keys();
  for (const auto& [k, v] : raw_) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw ConfigError("unknown parameter '" + k + "'");
    }
  }
}

const std::string* Params::find(const std::string& key) const {
  const auto it = raw_.find(key);
  if (it == raw_.end() || trim(it->second).empty()) return nullptr;
  return &it->second;
}

bool Params::has(const std::string& key) const { return find(key) != nullptr; }

Params Params::without(const std::string& key) const {
  auto raw = raw_;
  raw.erase(key);
  return Params(raw);
}

double Params::real(const std::string& key, double fallback) const {
  const auto* v = find(key);
  return v ? to_real(key, trim(*v)) : fallback;
}

int Params::integer(const std::string& key, int fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  const long long n = to_integer(key, trim(*v));
  if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max()) {
    throw ConfigError("parameter '" + key + "' out of range");
  }
  return static_cast<int>(n);
}

std::int64_t Params::integer64(const std::string& key, std::int64_t fallback) const {
  const auto* v = find(key);
  return v ? static_cast<std::int64_t>(to_integer(key, trim(*v))) : fallback;
}

std::uint64_t Params::unsigned64(const std::string& key, std::uint64_t fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  const std::string t = trim(*v);
  errno = 0;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(t.c_str(), &end, 10);
  if (t.empty() || t[0] == '-' || end == t.c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError("parameter '" + key + "': '" + t + "' is not a non-negative integer");
  }
  return n;
}

std::string Params::text(const std::string& key, const std::string& fallback) const {
  const auto* v = find(key);
  return v ? trim(*v) : fallback;
}

bool Params::flag(const std::string& key) const {
  const auto* v = find(key);
  if (!v) return false;
  const std::string t = trim(*v);
  if (t == "1" || t == "true" || t == "on" || t == "yes") return true;
  if (t == "0" || t == "false" || t == "off" || t == "no") return false;
  throw ConfigError("parameter '" + key + "': '" + t + "' is not a boolean");
}

std::vector<double> Params::reals(const std::string& key, const std::vector<double>& fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  std::vector<double> out;
  for (const auto& item : split(*v)) out.push_back(to_real(key, item));
  if (out.empty()) throw ConfigError("parameter '" + key + "' is empty");
  return out;
}

std::vector<int> Params::integers(const std::string& key, const std::vector<int>& fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  std::vector<int> out;
  for (const auto& item : split(*v)) {
    // Ranges a:b are inclusive.
    const auto colon = item.find(':');
    if (colon != std::string::npos) {
      const long long lo = to_integer(key, trim(item.substr(0, colon)));
      const long long hi = to_integer(key, trim(item.substr(colon + 1)));
      if (hi < lo || hi - lo > 1'000'000) throw ConfigError("parameter '" + key + "': bad range " + item);
      for (long long i = lo; i <= hi; ++i) out.push_back(static_cast<int>(i));
    } else {
      out.push_back(static_cast<int>(to_integer(key, item)));
    }
  }
  if (out.empty()) throw ConfigError("parameter '" + key + "' is empty");
  return out;
}

}  // namespace mcdelay::cli
