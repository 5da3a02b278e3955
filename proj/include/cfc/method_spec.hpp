#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfc/engine.hpp"

namespace cfc {

// "name[:key=value,...]", e.g. "dynamic:t=2" or "grid:L=8,inner=trivial".
struct MethodSpec {
  std::string name;
  std::map<std::string, std::string> params;

  // Throws ConfigError on malformed text or repeated keys.
  static MethodSpec parse(std::string_view text);

  std::string to_string() const;
  // Parameters only, joined with `sep` ("t=2;universe=1024").
  std::string params_string(char sep = ';') const;

  bool has(const std::string& key) const { return params.count(key) != 0; }
  long long get_int(const std::string& key, std::optional<long long> fallback = std::nullopt) const;
  double get_double(const std::string& key, std::optional<double> fallback = std::nullopt) const;
  std::string get_string(const std::string& key, std::optional<std::string> fallback = std::nullopt) const;
};

// Parameters given as separate command-line flags.
struct MethodFlags {
  std::optional<std::int64_t> universe;
  std::optional<int> t;
  std::optional<double> eps;
  std::optional<int> L;
  std::optional<std::string> inner;
};

// Adds the flags that the method accepts and the spec does not already set.
// A flag that disagrees with the spec is a ConfigError, and so is a flag the
// method does not take unless `skip_foreign` is set.
MethodSpec merge_flags(MethodSpec spec, const MethodFlags& flags, bool skip_foreign = false);

const std::vector<std::string>& known_methods();

// Validates the method name and its parameters, then builds the engine.
std::unique_ptr<Engine> make_engine(const MethodSpec& spec);
EngineFactory make_factory(const MethodSpec& spec);

}  // namespace cfc
