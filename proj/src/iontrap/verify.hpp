#pragma once

// Cross-checks of the semiclassical model against the Fock oracle, used by
// the `verify` and `dequantize` commands.

#include <cstdint>
#include <string>
#include <vector>

#include "iontrap/config.hpp"
#include "iontrap/fock.hpp"

namespace iontrap {

struct DequantizationResult {
  HusimiCoefficients coefficients;
  double omega_c_scaled = 0.0;
  double value = 0.0;   // H~ from the closed-form coefficients
  double oracle = 0.0;  // <psi|H_l|psi> in the truncated Fock space
  double difference = 0.0;
  int n_axial = 0;
  int n_radial = 0;
};

// Truncation used for oracle expectations: at least `floor`, and twice what
// the coherent-state tail alone requires.
int oracle_dimension(cplx z, double k, int floor);

// tau in scheme time.
DequantizationResult dequantize(const RunConfig& cfg, cplx z_a, cplx z_r, double tau = 0.0);

enum class CheckStatus { Pass, Fail, Approximate };

const char* check_status_name(CheckStatus s) noexcept;

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Fail;
  double residual = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  std::string to_json() const;
};

VerifyReport run_verification(const RunConfig& cfg, std::uint64_t seed);

// Central-difference Wirtinger gradient of H~ (oracle for husimi_gradient).
HusimiGradient finite_difference_gradient(const HusimiCoefficients& c, cplx z_a, cplx z_r,
                                          double h = 1e-6);

}  // namespace iontrap
