#pragma once

// simulate / scan drivers and their CSV writers. Output is deterministic:
// only the "# generated:" header line depends on the caller.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "iontrap/config.hpp"

namespace iontrap {

struct TrajectoryRecord {
  double t;
  double re_z_a, im_z_a;
  double re_z_r, im_z_r;
  double xi_a, eta_a;
  double xi_r, eta_r;
  double H;
};

std::vector<TrajectoryRecord> run_simulation(const RunConfig& cfg);

// Requires cfg.grid; Penning traps are rejected.
StabilityMap run_scan(const RunConfig& cfg, unsigned threads);

void write_trajectory_csv(std::ostream& os, const RunConfig& cfg,
                          const std::vector<TrajectoryRecord>& records,
                          std::string_view timestamp);

void write_map_csv(std::ostream& os, const RunConfig& cfg, const StabilityMap& map,
                   std::string_view timestamp);

// "%.17g"
std::string format_double(double v);

}  // namespace iontrap
