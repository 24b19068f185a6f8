#include "iontrap/config.hpp"

#include <cmath>
#include <initializer_list>

#include <json.hpp>

#include "iontrap/error.hpp"

namespace iontrap {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::Config, "config: " + key + ": " + what);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || item.key() == a;
    if (!known) fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
  }
}

double number(const json& obj, const std::string& path, const char* key,
              std::optional<double> fallback = std::nullopt) {
  const std::string name = path + "." + key;
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(name, "required key missing");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) fail(name, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(name, "must be finite");
  return d;
}

long long integer(const json& obj, const std::string& path, const char* key, long long fallback) {
  const std::string name = path + "." + key;
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(name, "expected an integer");
  return v.get<long long>();
}

std::string text(const json& obj, const std::string& path, const char* key,
                 const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

cplx complex_pair(const json& obj, const std::string& path, const char* key) {
  const std::string name = path + "." + key;
  if (!obj.contains(key)) return {0.0, 0.0};
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    fail(name, "expected [re, im]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

ScanRange range(const json& obj, const std::string& path, const char* key) {
  const std::string name = path + "." + key;
  if (!obj.contains(key)) fail(name, "required key missing");
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    fail(name, "expected [lo, hi]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

TrapKind parse_kind(const std::string& s) {
  if (s == "paul") return TrapKind::Paul;
  if (s == "penning") return TrapKind::Penning;
  if (s == "combined") return TrapKind::Combined;
  fail("trap.kind", "expected one of paul, penning, combined");
}

AxialSector parse_sector(const json& trap) {
  if (!trap.contains("k_a")) return AxialSector::Quarter;
  const json& v = trap.at("k_a");
  if (v.is_string()) {
    if (v == "1/4") return AxialSector::Quarter;
    if (v == "3/4") return AxialSector::ThreeQuarters;
  } else if (v.is_number()) {
    if (v.get<double>() == 0.25) return AxialSector::Quarter;
    if (v.get<double>() == 0.75) return AxialSector::ThreeQuarters;
  }
  fail("trap.k_a", "axial Bargmann index must be \"1/4\" or \"3/4\"");
}

StepperKind parse_stepper(const std::string& s) {
  if (s == "adaptive-RK45") return StepperKind::AdaptiveRK45;
  if (s == "fixed-RK4") return StepperKind::FixedRK4;
  fail("integrator.scheme", "expected adaptive-RK45 or fixed-RK4");
}

// Rewrites module validation errors so they carry the config prefix.
template <class F>
void checked(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) throw Error(ErrorCode::Config, std::string("config: ") + e.what());
    throw;
  }
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Config, std::string("config: malformed JSON: ") + e.what());
  }
  reject_unknown(root, "",
                 {"trap", "anharmonic", "initial", "integrator", "duration", "output", "grid", "oracle"});

  RunConfig cfg;
  if (!root.contains("trap")) fail("trap", "required key missing");
  const json& trap = root.at("trap");
  reject_unknown(trap, "trap",
                 {"kind", "mass", "charge", "U0", "V0", "Omega_rf", "r0", "z0", "B0", "l", "k_a"});
  if (!trap.contains("kind")) fail("trap.kind", "required key missing");
  cfg.trap.kind = parse_kind(text(trap, "trap", "kind", ""));
  cfg.trap.mass = number(trap, "trap", "mass");
  cfg.trap.charge = number(trap, "trap", "charge");
  cfg.trap.U0 = number(trap, "trap", "U0", 0.0);
  cfg.trap.V0 = number(trap, "trap", "V0", 0.0);
  cfg.trap.Omega_rf = number(trap, "trap", "Omega_rf", 0.0);
  cfg.trap.r0 = number(trap, "trap", "r0");
  cfg.trap.z0 = number(trap, "trap", "z0");
  cfg.trap.B0 = number(trap, "trap", "B0", 0.0);
  const long long l = integer(trap, "trap", "l", 0);
  if (l < 0) fail("trap.l", "must be >= 0 (Bargmann index k_r = (l+1)/2 must be positive)");
  if (l > 1000000) fail("trap.l", "out of range");
  cfg.trap.l = static_cast<int>(l);
  cfg.trap.k_a_choice = parse_sector(trap);
  checked([&] { validate(cfg.trap); });

  if (root.contains("anharmonic")) {
    const json& a = root.at("anharmonic");
    reject_unknown(a, "anharmonic", {"c2", "c3"});
    cfg.anharmonic.c = {number(a, "anharmonic", "c2", 0.0), number(a, "anharmonic", "c3", 0.0)};
  } else {
    cfg.anharmonic.c = {0.0, 0.0};
  }

  if (root.contains("initial")) {
    const json& in = root.at("initial");
    reject_unknown(in, "initial", {"z_a", "z_r"});
    cfg.initial.z_a = complex_pair(in, "initial", "z_a");
    cfg.initial.z_r = complex_pair(in, "initial", "z_r");
  }
  for (const auto& [name, z] : {std::pair{"initial.z_a", cfg.initial.z_a}, std::pair{"initial.z_r", cfg.initial.z_r}}) {
    if (!(std::abs(z) <= 1.0 - kDiskGuard)) fail(name, "must lie inside the unit disk (|z| < 1)");
  }

  if (root.contains("integrator")) {
    const json& ig = root.at("integrator");
    reject_unknown(ig, "integrator", {"scheme", "rel_tol", "abs_tol", "max_step", "min_step"});
    cfg.integrator.scheme = parse_stepper(text(ig, "integrator", "scheme", "adaptive-RK45"));
    cfg.integrator.rel_tol = number(ig, "integrator", "rel_tol", cfg.integrator.rel_tol);
    cfg.integrator.abs_tol = number(ig, "integrator", "abs_tol", cfg.integrator.abs_tol);
    cfg.integrator.max_step = number(ig, "integrator", "max_step", cfg.integrator.max_step);
    cfg.integrator.min_step = number(ig, "integrator", "min_step", cfg.integrator.min_step);
  }
  checked([&] { validate(cfg.integrator); });

  if (root.contains("duration")) {
    const json& d = root.at("duration");
    reject_unknown(d, "duration", {"rf_periods"});
    cfg.duration_periods = number(d, "duration", "rf_periods", cfg.duration_periods);
  }
  if (!(cfg.duration_periods >= 0.0)) fail("duration.rf_periods", "must be >= 0");

  if (root.contains("output")) {
    const json& o = root.at("output");
    reject_unknown(o, "output", {"path", "format", "stride", "samples_per_period"});
    cfg.output.path = text(o, "output", "path", "");
    cfg.output.format = text(o, "output", "format", "csv");
    const long long stride = integer(o, "output", "stride", 1);
    const long long spp = integer(o, "output", "samples_per_period", 32);
    if (stride < 1) fail("output.stride", "must be >= 1");
    if (spp < 1) fail("output.samples_per_period", "must be >= 1");
    cfg.output.stride = static_cast<std::size_t>(stride);
    cfg.output.samples_per_period = static_cast<std::size_t>(spp);
  }
  if (cfg.output.format != "csv") fail("output.format", "only csv is supported");

  if (root.contains("grid")) {
    const json& g = root.at("grid");
    reject_unknown(g, "grid", {"U0", "V0", "nU", "nV"});
    GridConfig grid;
    grid.U0 = range(g, "grid", "U0");
    grid.V0 = range(g, "grid", "V0");
    const long long nU = integer(g, "grid", "nU", 2);
    const long long nV = integer(g, "grid", "nV", 2);
    if (nU < 2) fail("grid.nU", "must be >= 2");
    if (nV < 2) fail("grid.nV", "must be >= 2");
    grid.nU = static_cast<std::size_t>(nU);
    grid.nV = static_cast<std::size_t>(nV);
    cfg.grid = grid;
  }

  if (root.contains("oracle")) {
    const json& o = root.at("oracle");
    reject_unknown(o, "oracle", {"truncation", "evolve_periods"});
    const long long n = integer(o, "oracle", "truncation", 400);
    if (n < 16 || n > 100000) fail("oracle.truncation", "must be in [16, 100000]");
    cfg.oracle.truncation = static_cast<int>(n);
    cfg.oracle.evolve_periods = number(o, "oracle", "evolve_periods", 1.0);
    if (!(cfg.oracle.evolve_periods > 0.0)) fail("oracle.evolve_periods", "must be > 0");
  }
  return cfg;
}

std::string resolved_config_json(const RunConfig& cfg) {
  json root;
  root["trap"] = {
      {"kind", trap_kind_name(cfg.trap.kind)},
      {"mass", cfg.trap.mass},
      {"charge", cfg.trap.charge},
      {"U0", cfg.trap.U0},
      {"V0", cfg.trap.V0},
      {"Omega_rf", cfg.trap.Omega_rf},
      {"r0", cfg.trap.r0},
      {"z0", cfg.trap.z0},
      {"B0", cfg.trap.B0},
      {"l", cfg.trap.l},
      {"k_a", cfg.trap.k_a_choice == AxialSector::Quarter ? "1/4" : "3/4"},
  };
  root["anharmonic"] = {{"c2", cfg.anharmonic.coefficient(2)}, {"c3", cfg.anharmonic.coefficient(3)}};
  root["initial"] = {{"z_a", {cfg.initial.z_a.real(), cfg.initial.z_a.imag()}},
                     {"z_r", {cfg.initial.z_r.real(), cfg.initial.z_r.imag()}}};
  root["integrator"] = {{"scheme", stepper_kind_name(cfg.integrator.scheme)},
                        {"rel_tol", cfg.integrator.rel_tol},
                        {"abs_tol", cfg.integrator.abs_tol},
                        {"max_step", cfg.integrator.max_step},
                        {"min_step", cfg.integrator.min_step}};
  root["duration"] = {{"rf_periods", cfg.duration_periods}};
  root["output"] = {{"path", cfg.output.path},
                    {"format", cfg.output.format},
                    {"stride", cfg.output.stride},
                    {"samples_per_period", cfg.output.samples_per_period}};
  if (cfg.grid) {
    root["grid"] = {{"U0", {cfg.grid->U0.lo, cfg.grid->U0.hi}},
                    {"V0", {cfg.grid->V0.lo, cfg.grid->V0.hi}},
                    {"nU", cfg.grid->nU},
                    {"nV", cfg.grid->nV}};
  }
  root["oracle"] = {{"truncation", cfg.oracle.truncation},
                    {"evolve_periods", cfg.oracle.evolve_periods}};
  return root.dump();
}

}  // namespace iontrap
