#include "iontrap/husimi.hpp"

#include <cmath>

#include "iontrap/error.hpp"

namespace iontrap {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void require_k(int k) {
  if (k != 2 && k != 3) {
    throw Error(ErrorCode::InvalidArgument,
                "anharmonic order k = " + std::to_string(k) + " not supported (k in {2, 3})");
  }
}

}  // namespace

bool AnharmonicSpec::empty() const {
  for (double v : c) {
    if (v != 0.0) return false;
  }
  return true;
}

double AnharmonicSpec::coefficient(int k) const {
  const auto i = static_cast<std::size_t>(k - 2);
  return k >= 2 && i < c.size() ? c[i] : 0.0;
}

void validate(const AnharmonicSpec& spec) {
  if (spec.c.size() > 2) {
    throw Error(ErrorCode::Config,
                "anharmonic terms beyond c_3 are not supported (H~ stops at cubic xi terms)");
  }
  for (double v : spec.c) {
    if (!std::isfinite(v)) throw Error(ErrorCode::Config, "anharmonic coefficients must be finite");
  }
}

double h2k_weight(int k, int j) {
  require_k(k);
  if (j < 0 || j > k) throw Error(ErrorCode::InvalidArgument, "h2k term index out of range");
  const double fj = factorial(j);
  return factorial(2 * k) / (std::pow(4.0, j) * factorial(2 * k - 2 * j) * fj * fj);
}

double h2k_polynomial(int k, double rho2, double zz) {
  require_k(k);
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    sum += h2k_weight(k, j) * std::pow(rho2, j) * std::pow(zz, k - j);
  }
  return sum;
}

double cs_moment_factor(int n, double k) {
  switch (n) {
    case 0: return 1.0;
    case 1: return k;
    case 2: return k * k + 0.5 * k;
    case 3: return k * k * k + 0.5 * (3.0 * k * k + k);
    default:
      throw Error(ErrorCode::InvalidArgument, "coherent-state moment order must be <= 3");
  }
}

HusimiCoefficients husimi_coefficients(const TrapConfig& cfg, double t,
                                       const AnharmonicSpec& spec,
                                       const DimensionlessScheme& scheme) {
  validate(cfg);
  validate(spec);
  const BargmannIndices k = bargmann_indices(cfg);
  const AlphaBeta ab_a = alpha_beta(cfg, Mode::Axial, t, scheme);
  const AlphaBeta ab_r = alpha_beta(cfg, Mode::Radial, t, scheme);

  HusimiCoefficients c;
  // <K0 + K1> = k xi, <K0 - K1> = k eta
  c.A_a = 0.5 * k.k_a * (ab_a.alpha - ab_a.beta);
  c.B_a = 0.5 * k.k_a * (ab_a.alpha + ab_a.beta);
  c.A_r = 0.5 * k.k_r * (ab_r.alpha - ab_r.beta);
  c.B_r = 0.5 * k.k_r * (ab_r.alpha + ab_r.beta);
  c.const_term = -0.5 * scaled_cyclotron_frequency(cfg, scheme) * cfg.l;

  if (spec.empty()) return c;

  // rho^2 = 2 X_r, z^2 = 2 X_a with X = K0 + K1; the state is a product, so
  // <rho^2j z^2(k-j)> = 2^k mu_j(k_r) mu_(k-j)(k_a) xi_r^j xi_a^(k-j).
  const double g = scaled_field_strength(cfg, t, scheme);
  auto term = [&](int order, int j) {
    return g * spec.coefficient(order) * h2k_weight(order, j) * std::pow(2.0, order) *
           cs_moment_factor(j, k.k_r) * cs_moment_factor(order - j, k.k_a);
  };
  c.C02 = term(2, 0);
  c.C11 = term(2, 1);
  c.C20 = term(2, 2);
  c.D03 = term(3, 0);
  c.D12 = term(3, 1);
  c.D21 = term(3, 2);
  c.D30 = term(3, 3);
  return c;
}

double husimi_value(const HusimiCoefficients& c, const XiEta& a, const XiEta& r) {
  const double xr = r.xi, xa = a.xi;
  return c.A_r * r.eta + c.A_a * a.eta + c.B_r * xr + c.B_a * xa +
         (c.C20 * xr * xr + c.C11 * xr * xa + c.C02 * xa * xa) +
         (c.D30 * xr * xr * xr + c.D21 * xr * xr * xa + c.D12 * xr * xa * xa +
          c.D03 * xa * xa * xa) +
         c.const_term;
}

double husimi_value(const HusimiCoefficients& c, cplx z_a, cplx z_r) {
  return husimi_value(c, xi_eta(z_a), xi_eta(z_r));
}

HusimiPartials husimi_partials(const HusimiCoefficients& c, const XiEta& a,
                               const XiEta& r) {
  const double xr = r.xi, xa = a.xi;
  HusimiPartials p;
  p.d_eta_a = c.A_a;
  p.d_eta_r = c.A_r;
  p.d_xi_r = c.B_r + 2.0 * c.C20 * xr + c.C11 * xa + 3.0 * c.D30 * xr * xr +
             2.0 * c.D21 * xr * xa + c.D12 * xa * xa;
  p.d_xi_a = c.B_a + c.C11 * xr + 2.0 * c.C02 * xa + c.D21 * xr * xr +
             2.0 * c.D12 * xr * xa + 3.0 * c.D03 * xa * xa;
  return p;
}

HusimiGradient husimi_gradient(const HusimiCoefficients& c, cplx z_a, cplx z_r) {
  const XiEta a = xi_eta(z_a);
  const XiEta r = xi_eta(z_r);
  const HusimiPartials p = husimi_partials(c, a, r);
  const cplx ga = p.d_xi_a * xi_derivatives(z_a).dzbar + p.d_eta_a * eta_derivatives(z_a).dzbar;
  const cplx gr = p.d_xi_r * xi_derivatives(z_r).dzbar + p.d_eta_r * eta_derivatives(z_r).dzbar;
  return {ga, gr};
}

}  // namespace iontrap
