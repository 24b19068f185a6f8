#pragma once

// Axially symmetric 3D quadrupole trap: Paul (RF only), Penning (static +
// axial B field) and combined. All inputs are SI; the DimensionlessScheme
// converts to the internal units where hbar = m = 1.

namespace iontrap {

inline constexpr double kHbar = 1.054571817e-34;

enum class TrapKind { Paul, Penning, Combined };

// Axial Bargmann index: 1/4 holds the even-parity sector (incl. ground state),
// 3/4 the odd one.
enum class AxialSector { Quarter, ThreeQuarters };

enum class Mode { Axial, Radial };

struct TrapConfig {
  double mass = 0.0;      // kg
  double charge = 0.0;    // C, signed
  double U0 = 0.0;        // V
  double V0 = 0.0;        // V
  double Omega_rf = 0.0;  // rad/s
  double r0 = 0.0;        // m
  double z0 = 0.0;        // m
  double B0 = 0.0;        // T
  int l = 0;
  TrapKind kind = TrapKind::Paul;
  AxialSector k_a_choice = AxialSector::Quarter;
};

struct StiffnessSample {
  double t;
  double lambda_a;
  double lambda_r;
  double omega_c;
};

// x = length_scale * x~, t = time_scale * tau, E = energy_scale * E~.
struct DimensionlessScheme {
  double length_scale;
  double time_scale;
  double energy_scale;
};

struct AlphaBeta {
  double alpha;
  double beta;
};

struct BargmannIndices {
  double k_a;
  double k_r;
};

struct MathieuParameters {
  double a_z;
  double q_z;
  double a_r;
  double q_r;
};

const char* trap_kind_name(TrapKind kind) noexcept;

// Throws Error(Config) naming the violated invariant.
void validate(const TrapConfig& cfg);

DimensionlessScheme make_scheme(const TrapConfig& cfg);

// A(t) in V/m^2.
double potential_coefficient(const TrapConfig& cfg, double t);

StiffnessSample stiffness(const TrapConfig& cfg, double t);

AlphaBeta alpha_beta(const TrapConfig& cfg, Mode mode, double t,
                     const DimensionlessScheme& scheme);

BargmannIndices bargmann_indices(const TrapConfig& cfg);

MathieuParameters mathieu_parameters(const TrapConfig& cfg);

// Scheme-unit quantities.
double scaled_stiffness(const TrapConfig& cfg, Mode mode, double t,
                        const DimensionlessScheme& scheme);
double scaled_cyclotron_frequency(const TrapConfig& cfg,
                                  const DimensionlessScheme& scheme);
// q A(t) in scheme units: the prefactor of the anharmonic polynomial.
double scaled_field_strength(const TrapConfig& cfg, double t,
                             const DimensionlessScheme& scheme);

// Drive period in scheme time (pi for RF traps, 2 pi for Penning).
double reference_period(const TrapConfig& cfg, const DimensionlessScheme& scheme);

}  // namespace iontrap
