#include "iontrap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

#include "iontrap/error.hpp"

namespace iontrap {

namespace {

constexpr double kDequantizationTol = 1e-7;
constexpr double kOverlapTol = 1e-5;
constexpr double kK0Tol = 1e-6;
constexpr double kTangencyTol = 1e-6;
constexpr double kGradientTol = 1e-6;
constexpr int kMaxEvolveDimension = 4000;

cplx random_disk_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double phi = 2.0 * std::numbers::pi * u(rng);
  return std::polar(r, phi);
}

CheckResult dequantization_check(const RunConfig& cfg, std::mt19937_64& rng) {
  CheckResult res{"dequantization", CheckStatus::Pass, 0.0, kDequantizationTol, ""};
  const double period = reference_period(cfg.trap, make_scheme(cfg.trap));
  std::uniform_real_distribution<double> phase(0.0, period);
  std::vector<std::tuple<cplx, cplx, double>> points{{cfg.initial.z_a, cfg.initial.z_r, 0.0}};
  for (int i = 0; i < 8; ++i) {
    points.emplace_back(random_disk_point(rng, 0.6), random_disk_point(rng, 0.6), phase(rng));
  }
  for (const auto& [za, zr, tau] : points) {
    const DequantizationResult d = dequantize(cfg, za, zr, tau);
    res.residual = std::max(res.residual, std::abs(d.difference) / (1.0 + std::abs(d.value)));
  }
  res.detail = std::to_string(points.size()) + " coherent-state points";
  if (!(res.residual < res.threshold)) res.status = CheckStatus::Fail;
  return res;
}

std::vector<CheckResult> trajectory_checks(const RunConfig& cfg) {
  const DimensionlessScheme scheme = make_scheme(cfg.trap);
  const BargmannIndices k = bargmann_indices(cfg.trap);
  const double period = reference_period(cfg.trap, scheme);
  CheckResult overlap{"quadratic_overlap", CheckStatus::Pass, 0.0, kOverlapTol, ""};
  CheckResult k0{"quadratic_k0", CheckStatus::Pass, 0.0, kK0Tol, ""};

  if (!cfg.anharmonic.empty()) {
    // Coupled, non-quadratic: the state leaves the coherent-state manifold.
    overlap.status = k0.status = CheckStatus::Approximate;
    try {
      const int na = std::min(required_dimension(cfg.initial.z_a, k.k_a) + 16, 80);
      const int nr = std::min(required_dimension(cfg.initial.z_r, k.k_r) + 16, 80);
      const TrapHamiltonian h(cfg.trap, cfg.anharmonic, scheme, make_fock_rep(k.k_a, na),
                              make_fock_rep(k.k_r, nr));
      const double span = 0.05 * period;
      const SemiclassicalModel model = make_model(cfg.trap, cfg.anharmonic, scheme);
      IntegratorConfig tight;
      tight.rel_tol = 1e-12;
      tight.abs_tol = 1e-14;
      tight.max_step = 0.01;
      const auto cl = integrate({0.0, cfg.initial.z_a, cfg.initial.z_r}, span, model, tight, span);
      EvolveConfig ecfg;
      ecfg.max_step = 1e-3;
      ecfg.norm_tol = 1e-6;
      ecfg.leakage_tol = 1e-6;
      const auto q = evolve(product_cs(cfg.initial.z_a, h.axial_rep(), cfg.initial.z_r, h.radial_rep()),
                            h, {0.0, span}, ecfg);
      overlap.residual = 1.0 - q.back().overlap(product_cs(cl.back().z_a, h.axial_rep(),
                                                           cl.back().z_r, h.radial_rep()));
      const double qa = q.back().expect_axial(h.axial_rep().K0).real();
      const double ca = expect_generators({cl.back().z_a, k.k_a}).k0;
      k0.residual = std::abs(qa - ca);
      overlap.detail = k0.detail = "anharmonic terms present; short-span comparison over 0.05 periods";
    } catch (const std::exception& e) {
      overlap.detail = k0.detail = std::string("anharmonic terms present; oracle run aborted: ") + e.what();
      overlap.residual = k0.residual = std::nan("");
    }
    return {overlap, k0};
  }

  try {
    const SemiclassicalModel model = make_model(cfg.trap, cfg.anharmonic, scheme);
    IntegratorConfig tight;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-14;
    tight.max_step = 0.01;
    const double span = cfg.oracle.evolve_periods * period;
    const auto cl = integrate({0.0, cfg.initial.z_a, cfg.initial.z_r}, span, model, tight, period / 16.0);

    int na = 0, nr = 0;
    for (const TrajectoryState& s : cl) {
      na = std::max(na, 2 * required_dimension(s.z_a, k.k_a));
      nr = std::max(nr, 2 * required_dimension(s.z_r, k.k_r));
    }
    if (na > kMaxEvolveDimension || nr > kMaxEvolveDimension) {
      throw TruncationError("truncation insufficient: classical trajectory reaches |z| needing N = " +
                                std::to_string(std::max(na, nr)),
                            static_cast<std::size_t>(std::max(na, nr)));
    }
    const FockRep ra = make_fock_rep(k.k_a, na);
    const FockRep rr = make_fock_rep(k.k_r, nr);
    const TrapHamiltonian h(cfg.trap, cfg.anharmonic, scheme, ra, rr);
    std::vector<double> times;
    for (const TrajectoryState& s : cl) times.push_back(s.t);
    const auto q = evolve(product_cs(cfg.initial.z_a, ra, cfg.initial.z_r, rr), h, times);
    for (std::size_t i = 0; i < cl.size(); ++i) {
      overlap.residual = std::max(
          overlap.residual, 1.0 - q[i].overlap(product_cs(cl[i].z_a, ra, cl[i].z_r, rr)));
      const double da = q[i].expect_axial(ra.K0).real() - expect_generators({cl[i].z_a, k.k_a}).k0;
      const double dr = q[i].expect_radial(rr.K0).real() - expect_generators({cl[i].z_r, k.k_r}).k0;
      k0.residual = std::max({k0.residual, std::abs(da), std::abs(dr)});
    }
    overlap.detail = k0.detail = "N_a = " + std::to_string(na) + ", N_r = " + std::to_string(nr) +
                                 ", " + std::to_string(cl.size()) + " samples";
  } catch (const std::exception& e) {
    overlap.detail = k0.detail = e.what();
    overlap.residual = k0.residual = std::nan("");
  }
  if (!(overlap.residual <= overlap.threshold)) overlap.status = CheckStatus::Fail;
  if (!(k0.residual <= k0.threshold)) k0.status = CheckStatus::Fail;
  return {overlap, k0};
}

CheckResult tangency_check(const RunConfig& cfg) {
  CheckResult res{"ehrenfest_tangency", CheckStatus::Pass, 0.0, kTangencyTol, ""};
  try {
    const DimensionlessScheme scheme = make_scheme(cfg.trap);
    const BargmannIndices k = bargmann_indices(cfg.trap);
    const FockRep ra = make_fock_rep(k.k_a, oracle_dimension(cfg.initial.z_a, k.k_a, cfg.oracle.truncation));
    const FockRep rr = make_fock_rep(k.k_r, oracle_dimension(cfg.initial.z_r, k.k_r, cfg.oracle.truncation));
    const TrapHamiltonian h(cfg.trap, cfg.anharmonic, scheme, ra, rr);
    const auto quantum = k0_rates(product_cs(cfg.initial.z_a, ra, cfg.initial.z_r, rr).matrix(), h, 0.0);
    const auto classical = k0_rates(TrajectoryState{0.0, cfg.initial.z_a, cfg.initial.z_r},
                                    make_model(cfg.trap, cfg.anharmonic, scheme));
    res.residual = std::max(std::abs(quantum.first - classical.first),
                            std::abs(quantum.second - classical.second));
    res.detail = "d<K0>/dt at t = 0, both modes";
  } catch (const std::exception& e) {
    res.detail = e.what();
    res.residual = std::nan("");
  }
  if (!(res.residual <= res.threshold)) res.status = CheckStatus::Fail;
  return res;
}

CheckResult gradient_check(const RunConfig& cfg, std::mt19937_64& rng) {
  CheckResult res{"gradient_fd", CheckStatus::Pass, 0.0, kGradientTol, ""};
  const DimensionlessScheme scheme = make_scheme(cfg.trap);
  const HusimiCoefficients c = husimi_coefficients(cfg.trap, 0.0, cfg.anharmonic, scheme);
  std::vector<std::pair<cplx, cplx>> points{{cfg.initial.z_a, cfg.initial.z_r}};
  for (int i = 0; i < 64; ++i) points.emplace_back(random_disk_point(rng, 0.6), random_disk_point(rng, 0.6));
  for (const auto& [za, zr] : points) {
    const HusimiGradient an = husimi_gradient(c, za, zr);
    const HusimiGradient fd = finite_difference_gradient(c, za, zr);
    const double scale = std::max({1.0, std::abs(an.d_za_bar), std::abs(an.d_zr_bar)});
    res.residual = std::max(res.residual, std::max(std::abs(an.d_za_bar - fd.d_za_bar),
                                                   std::abs(an.d_zr_bar - fd.d_zr_bar)) / scale);
  }
  res.detail = std::to_string(points.size()) + " points, central differences h = 1e-6";
  if (!(res.residual < res.threshold)) res.status = CheckStatus::Fail;
  return res;
}

}  // namespace

int oracle_dimension(cplx z, double k, int floor) {
  return std::max(floor, 2 * required_dimension(z, k));
}

DequantizationResult dequantize(const RunConfig& cfg, cplx z_a, cplx z_r, double tau) {
  const DimensionlessScheme scheme = make_scheme(cfg.trap);
  const BargmannIndices k = bargmann_indices(cfg.trap);
  DequantizationResult d;
  d.coefficients = husimi_coefficients(cfg.trap, tau * scheme.time_scale, cfg.anharmonic, scheme);
  d.omega_c_scaled = scaled_cyclotron_frequency(cfg.trap, scheme);
  d.value = husimi_value(d.coefficients, z_a, z_r);
  d.n_axial = oracle_dimension(z_a, k.k_a, cfg.oracle.truncation);
  d.n_radial = oracle_dimension(z_r, k.k_r, cfg.oracle.truncation);
  const FockRep ra = make_fock_rep(k.k_a, d.n_axial);
  const FockRep rr = make_fock_rep(k.k_r, d.n_radial);
  const TrapHamiltonian h(cfg.trap, cfg.anharmonic, scheme, ra, rr);
  d.oracle = h.at(tau).expectation(product_cs(z_a, ra, z_r, rr)).real();
  d.difference = d.value - d.oracle;
  return d;
}

HusimiGradient finite_difference_gradient(const HusimiCoefficients& c, cplx z_a, cplx z_r,
                                          double h) {
  auto wirtinger = [&](auto&& f, cplx z) {
    const double dx = (f(z + h) - f(z - h)) / (2.0 * h);
    const double dy = (f(z + cplx(0.0, h)) - f(z - cplx(0.0, h))) / (2.0 * h);
    return 0.5 * cplx(dx, dy);
  };
  return {wirtinger([&](cplx z) { return husimi_value(c, z, z_r); }, z_a),
          wirtinger([&](cplx z) { return husimi_value(c, z_a, z); }, z_r)};
}

const char* check_status_name(CheckStatus s) noexcept {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Approximate: return "approximate regime";
  }
  return "fail";
}

bool VerifyReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
}

std::string VerifyReport::to_json() const {
  nlohmann::json j;
  j["version"] = kVersion;
  j["passed"] = passed();
  j["checks"] = nlohmann::json::array();
  for (const CheckResult& c : checks) {
    nlohmann::json cj{{"name", c.name},
                      {"status", check_status_name(c.status)},
                      {"threshold", c.threshold},
                      {"detail", c.detail}};
    // NaN is not valid JSON
    cj["residual"] = std::isfinite(c.residual) ? nlohmann::json(c.residual) : nlohmann::json();
    j["checks"].push_back(cj);
  }
  return j.dump(2);
}

VerifyReport run_verification(const RunConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  VerifyReport report;
  report.checks.push_back(dequantization_check(cfg, rng));
  for (CheckResult& c : trajectory_checks(cfg)) report.checks.push_back(std::move(c));
  report.checks.push_back(tangency_check(cfg));
  report.checks.push_back(gradient_check(cfg, rng));
  return report;
}

}  // namespace iontrap
