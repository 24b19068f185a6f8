#include "iontrap/trap.hpp"

#include <cmath>
#include <numbers>

#include "iontrap/error.hpp"

namespace iontrap {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw Error(ErrorCode::Config, message);
}

bool has_rf(const TrapConfig& cfg) { return cfg.kind != TrapKind::Penning; }

}  // namespace

const char* trap_kind_name(TrapKind kind) noexcept {
  switch (kind) {
    case TrapKind::Paul: return "paul";
    case TrapKind::Penning: return "penning";
    case TrapKind::Combined: return "combined";
  }
  return "unknown";
}

void validate(const TrapConfig& cfg) {
  require(std::isfinite(cfg.mass) && cfg.mass > 0.0, "trap.mass must be > 0");
  require(std::isfinite(cfg.charge), "trap.charge must be finite");
  require(std::isfinite(cfg.U0) && std::isfinite(cfg.V0), "trap voltages must be finite");
  require(std::isfinite(cfg.r0) && cfg.r0 > 0.0, "trap.r0 must be > 0");
  require(std::isfinite(cfg.z0) && cfg.z0 > 0.0, "trap.z0 must be > 0");
  require(std::isfinite(cfg.B0), "trap.B0 must be finite");
  require(cfg.l >= 0, "trap.l must be >= 0 (Bargmann index k_r = (l+1)/2 must be positive)");
  switch (cfg.kind) {
    case TrapKind::Paul:
      require(cfg.B0 == 0.0, "trap.B0 must be 0 for a Paul trap");
      break;
    case TrapKind::Penning:
      require(cfg.V0 == 0.0, "trap.V0 must be 0 for a Penning trap");
      require(cfg.charge != 0.0 && cfg.B0 != 0.0,
              "Penning trap needs nonzero charge and B0 (cyclotron frequency sets the time scale)");
      break;
    case TrapKind::Combined:
      break;
  }
  if (has_rf(cfg)) {
    require(std::isfinite(cfg.Omega_rf) && cfg.Omega_rf > 0.0, "trap.Omega_rf must be > 0");
  }
}

DimensionlessScheme make_scheme(const TrapConfig& cfg) {
  validate(cfg);
  const double T = has_rf(cfg) ? 2.0 / cfg.Omega_rf
                                : 1.0 / std::abs(cfg.charge * cfg.B0 / cfg.mass);
  return {std::sqrt(kHbar * T / cfg.mass), T, kHbar / T};
}

double potential_coefficient(const TrapConfig& cfg, double t) {
  const double d2 = cfg.r0 * cfg.r0 + 2.0 * cfg.z0 * cfg.z0;
  if (!has_rf(cfg)) return cfg.U0 / d2;
  return (cfg.U0 + cfg.V0 * std::cos(cfg.Omega_rf * t)) / d2;
}

StiffnessSample stiffness(const TrapConfig& cfg, double t) {
  const double A = potential_coefficient(cfg, t);
  const double lambda_a = -4.0 * cfg.charge / cfg.mass * A;
  const double omega_c = cfg.charge / cfg.mass * cfg.B0;
  return {t, lambda_a, 0.25 * (omega_c * omega_c - 2.0 * lambda_a), omega_c};
}

double scaled_stiffness(const TrapConfig& cfg, Mode mode, double t,
                        const DimensionlessScheme& scheme) {
  const StiffnessSample s = stiffness(cfg, t);
  const double T2 = scheme.time_scale * scheme.time_scale;
  return (mode == Mode::Axial ? s.lambda_a : s.lambda_r) * T2;
}

double scaled_cyclotron_frequency(const TrapConfig& cfg,
                                  const DimensionlessScheme& scheme) {
  return cfg.charge / cfg.mass * cfg.B0 * scheme.time_scale;
}

double scaled_field_strength(const TrapConfig& cfg, double t,
                             const DimensionlessScheme& scheme) {
  const double T2 = scheme.time_scale * scheme.time_scale;
  return cfg.charge * potential_coefficient(cfg, t) * T2 / cfg.mass;
}

AlphaBeta alpha_beta(const TrapConfig& cfg, Mode mode, double t,
                     const DimensionlessScheme& scheme) {
  // m lambda +/- hbar^2/m with hbar = m = 1.
  const double lambda = scaled_stiffness(cfg, mode, t, scheme);
  return {lambda + 1.0, lambda - 1.0};
}

BargmannIndices bargmann_indices(const TrapConfig& cfg) {
  if (cfg.l < 0) throw Error(ErrorCode::Config, "trap.l must be >= 0");
  const double k_a = cfg.k_a_choice == AxialSector::Quarter ? 0.25 : 0.75;
  return {k_a, 0.5 * (cfg.l + 1)};
}

MathieuParameters mathieu_parameters(const TrapConfig& cfg) {
  validate(cfg);
  if (!has_rf(cfg)) {
    throw Error(ErrorCode::InvalidArgument, "Mathieu parameters need an RF drive (Penning trap given)");
  }
  // lambda~_a(tau) = a_z - 2 q_z cos(2 tau) with tau = Omega t / 2.
  const double d2 = cfg.r0 * cfg.r0 + 2.0 * cfg.z0 * cfg.z0;
  const double denom = cfg.mass * cfg.Omega_rf * cfg.Omega_rf * d2;
  const double a_z = -16.0 * cfg.charge * cfg.U0 / denom;
  const double q_z = 8.0 * cfg.charge * cfg.V0 / denom;
  const double wc = 2.0 * cfg.charge * cfg.B0 / (cfg.mass * cfg.Omega_rf);
  return {a_z, q_z, 0.25 * wc * wc - 0.5 * a_z, -0.5 * q_z};
}

double reference_period(const TrapConfig& cfg, const DimensionlessScheme&) {
  return has_rf(cfg) ? std::numbers::pi : 2.0 * std::numbers::pi;
}

}  // namespace iontrap
