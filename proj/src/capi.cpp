#include "iontrap/iontrap.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <fstream>
#include <iostream>
#include <string>

#include "iontrap/error.hpp"
#include "iontrap/records.hpp"
#include "iontrap/verify.hpp"

struct itp_run {
  iontrap::RunConfig cfg;
  std::string resolved;
};

struct itp_trajectory {
  iontrap::RunConfig cfg;
  std::vector<iontrap::TrajectoryRecord> records;
};

struct itp_stability_map {
  iontrap::RunConfig cfg;
  iontrap::StabilityMap map;
};

namespace {

thread_local std::string last_error;

itp_status to_status(iontrap::ErrorCode code) {
  using iontrap::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return ITP_ERR_INVALID_ARGUMENT;
    case ErrorCode::Config: return ITP_ERR_CONFIG;
    case ErrorCode::Domain: return ITP_ERR_DOMAIN;
    case ErrorCode::BoundaryBreach: return ITP_ERR_BOUNDARY_BREACH;
    case ErrorCode::StepUnderflow: return ITP_ERR_STEP_UNDERFLOW;
    case ErrorCode::TruncationInsufficient: return ITP_ERR_TRUNCATION;
    case ErrorCode::DimensionCap: return ITP_ERR_DIMENSION_CAP;
    case ErrorCode::NormDrift: return ITP_ERR_NORM_DRIFT;
    case ErrorCode::Io: return ITP_ERR_IO;
  }
  return ITP_ERR_INTERNAL;
}

template <class F>
itp_status guarded(F&& f) {
  last_error.clear();
  try {
    f();
    return ITP_OK;
  } catch (const iontrap::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return ITP_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return ITP_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw iontrap::Error(iontrap::ErrorCode::InvalidArgument, what);
}

template <class W>
void write_to(const char* path, W&& write) {
  require(path != nullptr, "null output path");
  if (std::strcmp(path, "-") == 0) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw iontrap::Error(iontrap::ErrorCode::Io, std::string("cannot open ") + path);
  write(os);
  os.close();
  if (!os) throw iontrap::Error(iontrap::ErrorCode::Io, std::string("write failed: ") + path);
}

}  // namespace

extern "C" {

const char* itp_version(void) { return iontrap::kVersion; }

const char* itp_status_name(itp_status status) {
  switch (status) {
    case ITP_OK: return "ok";
    case ITP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ITP_ERR_CONFIG: return "config error";
    case ITP_ERR_DOMAIN: return "domain error";
    case ITP_ERR_BOUNDARY_BREACH: return "boundary breach";
    case ITP_ERR_STEP_UNDERFLOW: return "step underflow";
    case ITP_ERR_TRUNCATION: return "truncation insufficient";
    case ITP_ERR_DIMENSION_CAP: return "dimension cap exceeded";
    case ITP_ERR_NORM_DRIFT: return "truncation/step failure";
    case ITP_ERR_IO: return "i/o error";
    case ITP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* itp_last_error(void) { return last_error.c_str(); }

itp_status itp_run_from_json(const char* json_text, itp_run** out) {
  return guarded([&] {
    require(json_text != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto run = std::make_unique<itp_run>();
    run->cfg = iontrap::parse_run_config(json_text);
    run->resolved = iontrap::resolved_config_json(run->cfg);
    *out = run.release();
  });
}

void itp_run_free(itp_run* run) { delete run; }

itp_status itp_run_resolved_json(const itp_run* run, char* buf, size_t cap, size_t* len) {
  return guarded([&] {
    require(run != nullptr, "null run");
    if (len) *len = run->resolved.size();
    if (buf && cap > 0) {
      const size_t n = std::min(cap - 1, run->resolved.size());
      std::memcpy(buf, run->resolved.data(), n);
      buf[n] = '\0';
    }
  });
}

itp_status itp_run_scheme(const itp_run* run, itp_scheme* out) {
  return guarded([&] {
    require(run != nullptr && out != nullptr, "null argument");
    const auto s = iontrap::make_scheme(run->cfg.trap);
    const auto k = iontrap::bargmann_indices(run->cfg.trap);
    *out = {s.length_scale, s.time_scale, s.energy_scale,
            iontrap::scaled_cyclotron_frequency(run->cfg.trap, s), k.k_a, k.k_r,
            iontrap::reference_period(run->cfg.trap, s)};
  });
}

itp_status itp_run_initial(const itp_run* run, double out[4]) {
  return guarded([&] {
    require(run != nullptr && out != nullptr, "null argument");
    out[0] = run->cfg.initial.z_a.real();
    out[1] = run->cfg.initial.z_a.imag();
    out[2] = run->cfg.initial.z_r.real();
    out[3] = run->cfg.initial.z_r.imag();
  });
}

const char* itp_run_output_path(const itp_run* run) {
  return run ? run->cfg.output.path.c_str() : "";
}

itp_status itp_simulate(const itp_run* run, itp_trajectory** out) {
  return guarded([&] {
    require(run != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto traj = std::make_unique<itp_trajectory>();
    traj->cfg = run->cfg;
    traj->records = iontrap::run_simulation(run->cfg);
    *out = traj.release();
  });
}

size_t itp_trajectory_length(const itp_trajectory* traj) {
  return traj ? traj->records.size() : 0;
}

itp_status itp_trajectory_get(const itp_trajectory* traj, size_t i, itp_trajectory_row* row) {
  return guarded([&] {
    require(traj != nullptr && row != nullptr, "null argument");
    require(i < traj->records.size(), "trajectory index out of range");
    const auto& r = traj->records[i];
    *row = {r.t, r.re_z_a, r.im_z_a, r.re_z_r, r.im_z_r, r.xi_a, r.eta_a, r.xi_r, r.eta_r, r.H};
  });
}

itp_status itp_trajectory_write_csv(const itp_trajectory* traj, const char* path,
                                    const char* timestamp) {
  return guarded([&] {
    require(traj != nullptr, "null trajectory");
    write_to(path, [&](std::ostream& os) {
      iontrap::write_trajectory_csv(os, traj->cfg, traj->records, timestamp ? timestamp : "");
    });
  });
}

void itp_trajectory_free(itp_trajectory* traj) { delete traj; }

itp_status itp_scan(const itp_run* run, unsigned threads, itp_stability_map** out) {
  return guarded([&] {
    require(run != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto map = std::make_unique<itp_stability_map>();
    map->cfg = run->cfg;
    map->map = iontrap::run_scan(run->cfg, threads);
    *out = map.release();
  });
}

size_t itp_map_size(const itp_stability_map* map) { return map ? map->map.cells.size() : 0; }

itp_status itp_map_get(const itp_stability_map* map, size_t i, itp_map_cell* cell) {
  return guarded([&] {
    require(map != nullptr && cell != nullptr, "null argument");
    require(i < map->map.cells.size(), "map index out of range");
    const auto& c = map->map.cells[i];
    const bool ok = c.error.empty();
    *cell = {c.U0,
             c.V0,
             c.a_z,
             c.q_z,
             ok && c.verdicts.axial.stable ? 1 : 0,
             ok && c.verdicts.radial.stable ? 1 : 0,
             std::max(c.verdicts.axial.max_abs_multiplier, c.verdicts.radial.max_abs_multiplier),
             c.error.c_str()};
  });
}

itp_status itp_map_write_csv(const itp_stability_map* map, const char* path,
                             const char* timestamp) {
  return guarded([&] {
    require(map != nullptr, "null map");
    write_to(path, [&](std::ostream& os) {
      iontrap::write_map_csv(os, map->cfg, map->map, timestamp ? timestamp : "");
    });
  });
}

void itp_map_free(itp_stability_map* map) { delete map; }

itp_status itp_dequantize(const itp_run* run, double za_re, double za_im, double zr_re,
                          double zr_im, itp_dequantization* out) {
  return guarded([&] {
    require(run != nullptr && out != nullptr, "null argument");
    const auto d = iontrap::dequantize(run->cfg, {za_re, za_im}, {zr_re, zr_im});
    const auto& c = d.coefficients;
    out->coefficients = {c.A_a, c.A_r, c.B_a, c.B_r, c.C20, c.C11, c.C02,
                         c.D30, c.D21, c.D12, c.D03, c.const_term};
    out->omega_c_scaled = d.omega_c_scaled;
    out->value = d.value;
    out->oracle = d.oracle;
    out->difference = d.difference;
    out->n_axial = d.n_axial;
    out->n_radial = d.n_radial;
  });
}

itp_status itp_verify(const itp_run* run, uint64_t seed, char** report_json, int* passed) {
  return guarded([&] {
    require(run != nullptr && report_json != nullptr && passed != nullptr, "null argument");
    *report_json = nullptr;
    const auto report = iontrap::run_verification(run->cfg, seed);
    const std::string text = report.to_json();
    char* s = static_cast<char*>(std::malloc(text.size() + 1));
    if (!s) throw std::bad_alloc();
    std::memcpy(s, text.c_str(), text.size() + 1);
    *report_json = s;
    *passed = report.passed() ? 1 : 0;
  });
}

void itp_string_free(char* s) { std::free(s); }

}  // extern "C"
