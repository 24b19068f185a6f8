#pragma once

// Classical (Husimi) Hamiltonian of the trapped ion on the product of the
// axial and radial coherent-state disks:
//
//   H~ = A_r eta_r + A_a eta_a + B_r xi_r + B_a xi_a
//        + C20 xi_r^2 + C11 xi_r xi_a + C02 xi_a^2
//        + D30 xi_r^3 + D21 xi_r^2 xi_a + D12 xi_r xi_a^2 + D03 xi_a^3
//        + const_term
//
// The coefficients are the exact coherent-state expectation of the quantum
// Hamiltonian; see husimi_coefficients().

#include <vector>

#include "iontrap/su11.hpp"
#include "iontrap/trap.hpp"

namespace iontrap {

// Coefficients c_2, c_3 of H_4 and H_6 in the anharmonic polynomial
// P = sum_k c_k H_2k(rho, z). At most two entries.
struct AnharmonicSpec {
  std::vector<double> c;

  bool empty() const;
  double coefficient(int k) const;  // 0 when absent
};

void validate(const AnharmonicSpec& spec);

struct HusimiCoefficients {
  double A_a = 0, A_r = 0;
  double B_a = 0, B_r = 0;
  double C20 = 0, C11 = 0, C02 = 0;
  double D30 = 0, D21 = 0, D12 = 0, D03 = 0;
  double const_term = 0;
};

// H_2k(rho, z) = sum_j (2k)! rho^2j z^(2k-2j) / (4^j (2k-2j)! (j!)^2)
// taking rho^2 and z^2 as arguments. k in {2, 3}.
double h2k_polynomial(int k, double rho2, double zz);

// Coefficient of rho^2j z^(2k-2j) in H_2k.
double h2k_weight(int k, int j);

// mu_n(k) with <(K0 + K1)^n>_z = mu_n(k) xi^n on a Perelomov state, n <= 3.
double cs_moment_factor(int n, double k);

// t in seconds.
HusimiCoefficients husimi_coefficients(const TrapConfig& cfg, double t,
                                       const AnharmonicSpec& spec,
                                       const DimensionlessScheme& scheme);

double husimi_value(const HusimiCoefficients& c, const XiEta& a, const XiEta& r);
double husimi_value(const HusimiCoefficients& c, cplx z_a, cplx z_r);

struct HusimiPartials {
  double d_xi_a, d_eta_a, d_xi_r, d_eta_r;
};

HusimiPartials husimi_partials(const HusimiCoefficients& c, const XiEta& a,
                               const XiEta& r);

struct HusimiGradient {
  cplx d_za_bar;
  cplx d_zr_bar;
};

HusimiGradient husimi_gradient(const HusimiCoefficients& c, cplx z_a, cplx z_r);

}  // namespace iontrap
