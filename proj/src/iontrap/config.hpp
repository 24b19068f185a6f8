#pragma once

// Run configuration: a strict JSON document in SI units. Unknown keys and
// wrongly typed values are rejected with the offending key in the message.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "iontrap/dynamics.hpp"

namespace iontrap {

inline constexpr const char* kVersion = "0.1.0";

struct InitialState {
  cplx z_a{0.0, 0.0};
  cplx z_r{0.0, 0.0};
};

struct OutputConfig {
  std::string path;
  std::string format = "csv";
  std::size_t stride = 1;
  std::size_t samples_per_period = 32;
};

struct GridConfig {
  ScanRange U0{0.0, 0.0};
  ScanRange V0{0.0, 0.0};
  std::size_t nU = 2;
  std::size_t nV = 2;
};

struct OracleConfig {
  int truncation = 400;
  double evolve_periods = 1.0;
};

struct RunConfig {
  TrapConfig trap;
  AnharmonicSpec anharmonic;
  InitialState initial;
  IntegratorConfig integrator;
  double duration_periods = 10.0;  // RF periods (cyclotron periods for Penning)
  OutputConfig output;
  std::optional<GridConfig> grid;
  OracleConfig oracle;
};

RunConfig parse_run_config(std::string_view json_text);

// Canonical compact JSON with every default filled in; parsing it back
// yields the same RunConfig.
std::string resolved_config_json(const RunConfig& cfg);

}  // namespace iontrap
