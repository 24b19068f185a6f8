#pragma once

// Semiclassical equations of motion on the product of the axial and radial
// coherent-state disks,
//
//   dz_c/dtau = {z_c, H~}_c = (1 - |z_c|^2)^2 / (2 i k_c) dH~/dz_c*,
//
// plus Floquet stability of the harmonic part and parameter scans.
// Time is scheme time tau throughout.

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "iontrap/husimi.hpp"

namespace iontrap {

struct TrajectoryState {
  double t = 0.0;
  cplx z_a;
  cplx z_r;
};

enum class StepperKind { AdaptiveRK45, FixedRK4 };

const char* stepper_kind_name(StepperKind kind) noexcept;

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.05;
  StepperKind scheme = StepperKind::AdaptiveRK45;
  // adaptive steps below this size abort with StepUnderflow
  double min_step = 1e-14;
};

void validate(const IntegratorConfig& icfg);

using CoefficientSchedule = std::function<HusimiCoefficients(double tau)>;

struct SemiclassicalModel {
  double k_a = 0.25;
  double k_r = 0.5;
  CoefficientSchedule coefficients;
};

SemiclassicalModel make_model(const TrapConfig& cfg, const AnharmonicSpec& spec,
                              const DimensionlessScheme& scheme);

struct Rates {
  cplx dz_a;
  cplx dz_r;
};

Rates eom_rhs(const TrajectoryState& s, const SemiclassicalModel& model);
Rates eom_rhs(const TrajectoryState& s, const TrapConfig& cfg,
              const AnharmonicSpec& spec, const DimensionlessScheme& scheme);

// Classical rate of change of <K0> in each mode: {<K0>_c, H~}.
std::pair<double, double> k0_rates(const TrajectoryState& s,
                                   const SemiclassicalModel& model);

// Samples at t0, t0 + sample_interval, ..., and t_end. sample_interval <= 0
// records every accepted step instead. Throws BoundaryBreach when a step
// lands in the disk guard band and StepUnderflow when step control stalls.
std::vector<TrajectoryState> integrate(const TrajectoryState& initial, double t_end,
                                       const SemiclassicalModel& model,
                                       const IntegratorConfig& icfg,
                                       double sample_interval = 0.0);

std::vector<TrajectoryState> integrate(const TrajectoryState& initial, double t_end,
                                       const TrapConfig& cfg, const AnharmonicSpec& spec,
                                       const IntegratorConfig& icfg,
                                       double sample_interval = 0.0);

inline constexpr double kFloquetTolerance = 1e-6;

struct StabilityVerdict {
  bool stable = false;
  // |trace| within kFloquetTolerance of 2: a Mathieu boundary cell
  bool marginal = false;
  std::vector<cplx> floquet_multipliers;
  double max_abs_multiplier = 0.0;
  double trace = 0.0;
};

// One-period monodromy of the harmonic flow of one mode. The Riccati flow
// dz/dtau = p + 2 s z + p z^2 is lifted to the linear system z = u/v, whose
// 2x2 monodromy lies in SU(1,1).
StabilityVerdict monodromy(const TrapConfig& cfg, Mode mode,
                           const DimensionlessScheme& scheme,
                           const IntegratorConfig& icfg);

struct ModeVerdicts {
  StabilityVerdict axial;
  StabilityVerdict radial;

  bool stable() const { return axial.stable && radial.stable; }
};

ModeVerdicts monodromy(const TrapConfig& cfg, const DimensionlessScheme& scheme,
                       const IntegratorConfig& icfg);

struct ScanRange {
  double lo;
  double hi;
};

struct StabilityCell {
  double U0 = 0.0;
  double V0 = 0.0;
  double a_z = 0.0;
  double q_z = 0.0;
  ModeVerdicts verdicts;
  std::string error;  // empty on success
};

struct StabilityMap {
  std::size_t nU = 0;
  std::size_t nV = 0;
  std::vector<StabilityCell> cells;  // row-major: U0 outer, V0 inner

  const StabilityCell& at(std::size_t iu, std::size_t iv) const {
    return cells[iu * nV + iv];
  }
};

StabilityMap stability_scan(const TrapConfig& cfg_template, ScanRange U0_range,
                            ScanRange V0_range, std::size_t nU, std::size_t nV,
                            const IntegratorConfig& icfg, unsigned threads = 1);

}  // namespace iontrap
