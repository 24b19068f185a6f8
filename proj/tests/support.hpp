#pragma once

// Shared fixtures for the test suites: trap configurations built from
// Mathieu parameters, random disk samples, and an independent Mathieu
// Floquet oracle.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "iontrap/husimi.hpp"
#include "iontrap/trap.hpp"

namespace iontrap::testing {

// 40Ca+ in a trap with r0 = 1 mm, r0^2 + 2 z0^2 = 2 mm^2, 10 MHz drive.
inline constexpr double kMass = 40 * 1.66053906660e-27;
inline constexpr double kCharge = 1.602176634e-19;
inline constexpr double kOmega = 2 * std::numbers::pi * 10e6;
inline constexpr double kR0 = 1e-3;
inline const double kZ0 = std::sqrt(0.5) * 1e-3;

inline double d2() { return kR0 * kR0 + 2 * kZ0 * kZ0; }
inline double U0_for(double a_z) { return -a_z * kMass * kOmega * kOmega * d2() / (16 * kCharge); }
inline double V0_for(double q_z) { return q_z * kMass * kOmega * kOmega * d2() / (8 * kCharge); }

inline TrapConfig paul(double a_z, double q_z, int l = 0) {
  TrapConfig c;
  c.kind = TrapKind::Paul;
  c.mass = kMass;
  c.charge = kCharge;
  c.U0 = U0_for(a_z);
  c.V0 = V0_for(q_z);
  c.Omega_rf = kOmega;
  c.r0 = kR0;
  c.z0 = kZ0;
  c.l = l;
  return c;
}

// Combined trap; omega_c_scaled = 2 omega_c / Omega.
inline TrapConfig combined(double a_z, double q_z, double omega_c_scaled, int l = 0) {
  TrapConfig c = paul(a_z, q_z, l);
  c.kind = TrapKind::Combined;
  c.B0 = omega_c_scaled * kOmega / 2 * kMass / kCharge;
  return c;
}

// Penning trap with B0 = 1 T and lambda_a = ratio * omega_c^2.
inline TrapConfig penning(double ratio, int l = 0) {
  TrapConfig c;
  c.kind = TrapKind::Penning;
  c.mass = kMass;
  c.charge = kCharge;
  c.B0 = 1.0;
  const double wc = kCharge / kMass;
  c.U0 = -ratio * wc * wc * kMass * d2() / (4 * kCharge);
  c.r0 = kR0;
  c.z0 = kZ0;
  c.l = l;
  return c;
}

inline std::complex<double> disk_sample(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(radius * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
}

// Trace of the one-period monodromy of x'' + (a - 2q cos 2t) x = 0,
// classical RK4 on the real (x, x') system.
inline double mathieu_trace(double a, double q, int steps = 4000) {
  const double h = std::numbers::pi / steps;
  auto f = [&](double t, const double y[2], double dy[2]) {
    dy[0] = y[1];
    dy[1] = -(a - 2 * q * std::cos(2 * t)) * y[0];
  };
  double cols[2][2] = {{1, 0}, {0, 1}};
  for (auto& y : cols) {
    double t = 0;
    for (int i = 0; i < steps; ++i) {
      double k1[2], k2[2], k3[2], k4[2], tmp[2];
      f(t, y, k1);
      for (int j = 0; j < 2; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
      f(t + 0.5 * h, tmp, k2);
      for (int j = 0; j < 2; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
      f(t + 0.5 * h, tmp, k3);
      for (int j = 0; j < 2; ++j) tmp[j] = y[j] + h * k3[j];
      f(t + h, tmp, k4);
      for (int j = 0; j < 2; ++j) y[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
      t += h;
    }
  }
  // monodromy columns are the images of (1,0) and (0,1)
  return cols[0][0] + cols[1][1];
}

inline bool mathieu_stable(double a, double q) { return std::abs(mathieu_trace(a, q)) < 2.0; }

// First stability boundary in q at fixed a, by bisection on |trace| = 2.
inline double mathieu_boundary_q(double a, double lo, double hi, double tol = 1e-6) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (mathieu_stable(a, mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Number-basis oracle for a single SU(1,1) mode, written independently of
// the library's sparse representation.
struct LadderOracle {
  double k;
  int N;

  // <n|z> = (1 - |z|^2)^k z^n sqrt(Gamma(2k + n) / (n! Gamma(2k)))
  std::vector<std::complex<double>> coherent(std::complex<double> z) const {
    std::vector<std::complex<double>> v(N);
    const double r = std::abs(z), phase = std::arg(z);
    const double log_pref = k * std::log1p(-r * r);
    for (int n = 0; n < N; ++n) {
      const double log_mag = log_pref + 0.5 * (std::lgamma(2 * k + n) - std::lgamma(n + 1.0) -
                                               std::lgamma(2 * k));
      v[n] = n == 0 ? std::exp(log_pref) : std::polar(std::exp(log_mag + n * std::log(r)), n * phase);
    }
    return v;
  }

  // (K0 + K1) v with K+|n> = sqrt((n+1)(n+2k)) |n+1>
  std::vector<std::complex<double>> apply_x(const std::vector<std::complex<double>>& v) const {
    std::vector<std::complex<double>> out(N);
    for (int n = 0; n < N; ++n) {
      std::complex<double> acc = (k + n) * v[n];
      if (n > 0) acc += 0.5 * std::sqrt(n * (n - 1 + 2 * k)) * v[n - 1];
      if (n + 1 < N) acc += 0.5 * std::sqrt((n + 1) * (n + 2 * k)) * v[n + 1];
      out[n] = acc;
    }
    return out;
  }

  // K0 v
  std::vector<std::complex<double>> apply_k0(const std::vector<std::complex<double>>& v) const {
    std::vector<std::complex<double>> out(N);
    for (int n = 0; n < N; ++n) out[n] = (k + n) * v[n];
    return out;
  }

  static std::complex<double> dot(const std::vector<std::complex<double>>& a,
                                  const std::vector<std::complex<double>>& b) {
    std::complex<double> s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
  }

  // <z|(K0 + K1)^p|z> for p = 0..pmax
  std::vector<double> x_moments(std::complex<double> z, int pmax) const {
    const auto psi = coherent(z);
    std::vector<double> m{dot(psi, psi).real()};
    auto w = psi;
    for (int p = 1; p <= pmax; ++p) {
      w = apply_x(w);
      m.push_back(dot(psi, w).real());
    }
    return m;
  }

  double k0(std::complex<double> z) const {
    const auto psi = coherent(z);
    return dot(psi, apply_k0(psi)).real();
  }
};

// Expected <H_l> on a product coherent state, assembled from single-mode
// moments. Harmonic weights are alpha K0 + beta K1 per mode; the anharmonic
// polynomial is g sum_k c_k sum_j w_kj rho^2j z^2(k-j) with rho^2 = 2 X_r,
// z^2 = 2 X_a.
struct HamiltonianParameters {
  double alpha_a, beta_a, alpha_r, beta_r;
  double g;
  double c2, c3;
  double omega_c;
  int l;
};

inline double binomial_weight(int k, int j) {
  auto f = [](int n) { return std::tgamma(n + 1.0); };
  return f(2 * k) / (std::pow(4.0, j) * f(2 * k - 2 * j) * f(j) * f(j));
}

inline double oracle_energy(const HamiltonianParameters& hp, std::complex<double> z_a, double k_a,
                            std::complex<double> z_r, double k_r, int N) {
  const LadderOracle oa{k_a, N}, orr{k_r, N};
  const auto ma = oa.x_moments(z_a, 3), mr = orr.x_moments(z_r, 3);
  const double k0a = oa.k0(z_a), k0r = orr.k0(z_r);
  // K1 = X - K0
  double e = hp.alpha_a * k0a + hp.beta_a * (ma[1] - k0a) + hp.alpha_r * k0r +
             hp.beta_r * (mr[1] - k0r) - 0.5 * hp.omega_c * hp.l;
  const double ck[4] = {0, 0, hp.c2, hp.c3};
  for (int kk = 2; kk <= 3; ++kk) {
    for (int j = 0; j <= kk; ++j) {
      e += hp.g * ck[kk] * binomial_weight(kk, j) * std::pow(2.0, kk) * mr[j] * ma[kk - j];
    }
  }
  return e;
}

// Central-difference Wirtinger derivative dH/dz* = (dH/dx + i dH/dy) / 2.
inline HusimiGradient fd_gradient(const HusimiCoefficients& c, std::complex<double> za,
                                  std::complex<double> zr, double h = 1e-6) {
  auto d = [&](auto value_at) {
    const double dx = (value_at(h) - value_at(-h)) / (2 * h);
    const double dy = (value_at(std::complex<double>(0, h)) - value_at(std::complex<double>(0, -h))) / (2 * h);
    return 0.5 * std::complex<double>(dx, dy);
  };
  return {d([&](std::complex<double> e) { return husimi_value(c, za + e, zr); }),
          d([&](std::complex<double> e) { return husimi_value(c, za, zr + e); })};
}

}  // namespace iontrap::testing
