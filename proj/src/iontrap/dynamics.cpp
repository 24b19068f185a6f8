#include "iontrap/dynamics.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <boost/numeric/odeint.hpp>

#include "iontrap/error.hpp"

namespace iontrap {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<cplx>;
using Dopri5 = odeint::runge_kutta_dopri5<State, double, State, double>;
using Rk4 = odeint::runge_kutta4<State, double, State, double>;

// Rate of one mode given dH/dxi and dH/deta; the (1 - |z|^2)^2 factors of
// the bracket and the xi/eta derivatives cancel.
cplx mode_rate(cplx z, double k, double d_xi, double d_eta) {
  const cplx up = 1.0 + z;
  const cplx down = 1.0 - z;
  return (d_xi * up * up - d_eta * down * down) / cplx(0.0, 2.0 * k);
}

// No guard check: trial stages may leave the disk and get rejected by the
// error control. Accepted steps are checked by the caller.
Rates raw_rates(double t, cplx z_a, cplx z_r, const SemiclassicalModel& model) {
  const HusimiCoefficients c = model.coefficients(t);
  auto xe = [](cplx z) {
    const double d = (1.0 - z.real()) * (1.0 + z.real()) - z.imag() * z.imag();
    return XiEta{std::norm(1.0 + z) / d, std::norm(1.0 - z) / d};
  };
  const HusimiPartials p = husimi_partials(c, xe(z_a), xe(z_r));
  return {mode_rate(z_a, model.k_a, p.d_xi_a, p.d_eta_a),
          mode_rate(z_r, model.k_r, p.d_xi_r, p.d_eta_r)};
}

bool inside_guard(cplx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag()) &&
         std::abs(z) <= 1.0 - kDiskGuard;
}

void check_accepted(double t, const State& x) {
  if (!inside_guard(x[0]) || !inside_guard(x[1])) {
    std::ostringstream os;
    os.precision(10);
    os << "boundary breach at t = " << t << ": |z_a| = " << std::abs(x[0])
       << ", |z_r| = " << std::abs(x[1]);
    throw Error(ErrorCode::BoundaryBreach, os.str());
  }
}

std::vector<double> sample_times(double t0, double t_end, double dt) {
  std::vector<double> times;
  const double span = t_end - t0;
  const auto n = static_cast<std::size_t>(std::floor(span / dt + 1e-9));
  times.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) times.push_back(t0 + static_cast<double>(i) * dt);
  if (t_end - times.back() > 1e-9 * dt) {
    times.push_back(t_end);
  } else {
    times.back() = t_end;
  }
  return times;
}

StabilityVerdict verdict_from(const std::array<cplx, 4>& m) {
  // m = [[m00, m01], [m10, m11]]
  const cplx tr = m[0] + m[3];
  const cplx det = m[0] * m[3] - m[1] * m[2];
  const cplx disc = std::sqrt(tr * tr - 4.0 * det);
  StabilityVerdict v;
  v.floquet_multipliers = {0.5 * (tr + disc), 0.5 * (tr - disc)};
  v.max_abs_multiplier = std::max(std::abs(v.floquet_multipliers[0]),
                                  std::abs(v.floquet_multipliers[1]));
  v.trace = tr.real();
  v.stable = v.max_abs_multiplier <= 1.0 + kFloquetTolerance;
  v.marginal = std::abs(std::abs(v.trace) - 2.0) < kFloquetTolerance;
  return v;
}

}  // namespace

const char* stepper_kind_name(StepperKind kind) noexcept {
  return kind == StepperKind::AdaptiveRK45 ? "adaptive-RK45" : "fixed-RK4";
}

void validate(const IntegratorConfig& icfg) {
  if (!(icfg.rel_tol > 0.0) || !(icfg.abs_tol > 0.0)) {
    throw Error(ErrorCode::Config, "integrator tolerances must be > 0");
  }
  if (!(icfg.max_step > 0.0)) throw Error(ErrorCode::Config, "integrator.max_step must be > 0");
  if (!(icfg.min_step > 0.0) || icfg.min_step >= icfg.max_step) {
    throw Error(ErrorCode::Config, "integrator.min_step must be in (0, max_step)");
  }
}

SemiclassicalModel make_model(const TrapConfig& cfg, const AnharmonicSpec& spec,
                              const DimensionlessScheme& scheme) {
  validate(cfg);
  validate(spec);
  const BargmannIndices k = bargmann_indices(cfg);
  SemiclassicalModel model;
  model.k_a = k.k_a;
  model.k_r = k.k_r;
  model.coefficients = [cfg, spec, scheme](double tau) {
    return husimi_coefficients(cfg, tau * scheme.time_scale, spec, scheme);
  };
  return model;
}

Rates eom_rhs(const TrajectoryState& s, const SemiclassicalModel& model) {
  check_disk(s.z_a);
  check_disk(s.z_r);
  return raw_rates(s.t, s.z_a, s.z_r, model);
}

Rates eom_rhs(const TrajectoryState& s, const TrapConfig& cfg,
              const AnharmonicSpec& spec, const DimensionlessScheme& scheme) {
  return eom_rhs(s, make_model(cfg, spec, scheme));
}

std::pair<double, double> k0_rates(const TrajectoryState& s,
                                   const SemiclassicalModel& model) {
  const Rates r = eom_rhs(s, model);
  // d<K0>/dt = 2 Re(d<K0>/dz dz/dt), d<K0>/dz = 2k z* / (1 - |z|^2)^2
  auto rate = [](cplx z, double k, cplx dz) {
    const double d = 1.0 - std::norm(z);
    return 2.0 * (2.0 * k * std::conj(z) / (d * d) * dz).real();
  };
  return {rate(s.z_a, model.k_a, r.dz_a), rate(s.z_r, model.k_r, r.dz_r)};
}

std::vector<TrajectoryState> integrate(const TrajectoryState& initial, double t_end,
                                       const SemiclassicalModel& model,
                                       const IntegratorConfig& icfg,
                                       double sample_interval) {
  validate(icfg);
  check_disk(initial.z_a);
  check_disk(initial.z_r);
  if (!(t_end >= initial.t)) throw Error(ErrorCode::InvalidArgument, "t_end precedes the initial time");

  auto rhs = [&model](const State& x, State& dx, double t) {
    const Rates r = raw_rates(t, x[0], x[1], model);
    dx[0] = r.dz_a;
    dx[1] = r.dz_r;
  };

  std::vector<TrajectoryState> out;
  out.push_back(initial);
  if (t_end == initial.t) return out;

  const bool every_step = !(sample_interval > 0.0);
  std::vector<double> times;
  if (!every_step) times = sample_times(initial.t, t_end, sample_interval);
  std::size_t next = 1;  // times[0] is the initial state

  State x{initial.z_a, initial.z_r};

  if (icfg.scheme == StepperKind::FixedRK4) {
    Rk4 stepper;
    const std::vector<double> grid =
        every_step ? sample_times(initial.t, t_end, icfg.max_step) : times;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double span = grid[i] - grid[i - 1];
      const auto n = static_cast<std::size_t>(std::ceil(span / icfg.max_step - 1e-12));
      const double h = span / static_cast<double>(std::max<std::size_t>(n, 1));
      double t = grid[i - 1];
      for (std::size_t s = 0; s < std::max<std::size_t>(n, 1); ++s) {
        stepper.do_step(rhs, x, t, h);
        t = grid[i - 1] + static_cast<double>(s + 1) * h;
        check_accepted(t, x);
      }
      out.push_back({grid[i], x[0], x[1]});
    }
    return out;
  }

  auto dense = odeint::make_dense_output(icfg.abs_tol, icfg.rel_tol, icfg.max_step, Dopri5());
  dense.initialize(x, initial.t, std::min(icfg.max_step, 1e-3));
  State tmp(2);
  try {
    while (dense.current_time() < t_end) {
      const auto [t_prev, t_now] = dense.do_step(rhs);
      check_accepted(t_now, dense.current_state());
      if (t_now - t_prev < icfg.min_step && t_now < t_end) {
        std::ostringstream os;
        os << "step underflow at t = " << t_now << " (dt = " << (t_now - t_prev) << ")";
        throw Error(ErrorCode::StepUnderflow, os.str());
      }
      if (every_step) {
        if (t_now <= t_end) {
          out.push_back({t_now, dense.current_state()[0], dense.current_state()[1]});
        } else {
          dense.calc_state(t_end, tmp);
          check_accepted(t_end, tmp);
          out.push_back({t_end, tmp[0], tmp[1]});
        }
        continue;
      }
      while (next < times.size() && times[next] <= t_now) {
        dense.calc_state(times[next], tmp);
        check_accepted(times[next], tmp);
        out.push_back({times[next], tmp[0], tmp[1]});
        ++next;
      }
    }
  } catch (const odeint::step_adjustment_error& e) {
    throw Error(ErrorCode::StepUnderflow, std::string("step underflow: ") + e.what());
  } catch (const odeint::no_progress_error& e) {
    throw Error(ErrorCode::StepUnderflow, std::string("step underflow: ") + e.what());
  }
  return out;
}

std::vector<TrajectoryState> integrate(const TrajectoryState& initial, double t_end,
                                       const TrapConfig& cfg, const AnharmonicSpec& spec,
                                       const IntegratorConfig& icfg,
                                       double sample_interval) {
  return integrate(initial, t_end, make_model(cfg, spec, make_scheme(cfg)), icfg,
                   sample_interval);
}

StabilityVerdict monodromy(const TrapConfig& cfg, Mode mode,
                           const DimensionlessScheme& scheme,
                           const IntegratorConfig& icfg) {
  validate(cfg);
  validate(icfg);
  if (cfg.kind == TrapKind::Penning) {
    throw Error(ErrorCode::InvalidArgument, "monodromy needs an RF drive (Penning trap given)");
  }
  const AnharmonicSpec harmonic;
  const double k = mode == Mode::Axial ? bargmann_indices(cfg).k_a : bargmann_indices(cfg).k_r;

  // z = u/v; u' = s u + p v, v' = -p u - s v with
  // s = (A + B)/(2ik), p = (B - A)/(2ik).
  auto rhs = [&](const State& m, State& dm, double tau) {
    const HusimiCoefficients c =
        husimi_coefficients(cfg, tau * scheme.time_scale, harmonic, scheme);
    const double A = mode == Mode::Axial ? c.A_a : c.A_r;
    const double B = mode == Mode::Axial ? c.B_a : c.B_r;
    const cplx s = (A + B) / cplx(0.0, 2.0 * k);
    const cplx p = (B - A) / cplx(0.0, 2.0 * k);
    // columns of m evolve independently: m = [[m0, m1], [m2, m3]]
    dm[0] = s * m[0] + p * m[2];
    dm[1] = s * m[1] + p * m[3];
    dm[2] = -p * m[0] - s * m[2];
    dm[3] = -p * m[1] - s * m[3];
  };

  State m{1.0, 0.0, 0.0, 1.0};
  const double period = reference_period(cfg, scheme);
  if (icfg.scheme == StepperKind::FixedRK4) {
    const auto n = static_cast<std::size_t>(std::ceil(period / icfg.max_step));
    odeint::integrate_n_steps(Rk4(), rhs, m, 0.0, period / static_cast<double>(n), n);
  } else {
    try {
      odeint::integrate_adaptive(
          odeint::make_controlled(icfg.abs_tol, icfg.rel_tol, icfg.max_step, Dopri5()), rhs, m,
          0.0, period, std::min(icfg.max_step, 1e-3));
    } catch (const odeint::step_adjustment_error& e) {
      throw Error(ErrorCode::StepUnderflow, std::string("step underflow: ") + e.what());
    }
  }
  return verdict_from({m[0], m[1], m[2], m[3]});
}

ModeVerdicts monodromy(const TrapConfig& cfg, const DimensionlessScheme& scheme,
                       const IntegratorConfig& icfg) {
  return {monodromy(cfg, Mode::Axial, scheme, icfg), monodromy(cfg, Mode::Radial, scheme, icfg)};
}

StabilityMap stability_scan(const TrapConfig& cfg_template, ScanRange U0_range,
                            ScanRange V0_range, std::size_t nU, std::size_t nV,
                            const IntegratorConfig& icfg, unsigned threads) {
  if (nU < 2 || nV < 2) throw Error(ErrorCode::InvalidArgument, "scan grid needs nU, nV >= 2");
  if (cfg_template.kind == TrapKind::Penning) {
    throw Error(ErrorCode::InvalidArgument, "stability scan needs an RF drive (Penning trap given)");
  }
  validate(icfg);

  StabilityMap map;
  map.nU = nU;
  map.nV = nV;
  map.cells.resize(nU * nV);
  for (std::size_t i = 0; i < nU; ++i) {
    for (std::size_t j = 0; j < nV; ++j) {
      StabilityCell& cell = map.cells[i * nV + j];
      cell.U0 = U0_range.lo + (U0_range.hi - U0_range.lo) * static_cast<double>(i) /
                                  static_cast<double>(nU - 1);
      cell.V0 = V0_range.lo + (V0_range.hi - V0_range.lo) * static_cast<double>(j) /
                                  static_cast<double>(nV - 1);
    }
  }

  auto run_cell = [&](StabilityCell& cell) {
    TrapConfig cfg = cfg_template;
    cfg.U0 = cell.U0;
    cfg.V0 = cell.V0;
    try {
      const MathieuParameters mp = mathieu_parameters(cfg);
      cell.a_z = mp.a_z;
      cell.q_z = mp.q_z;
      cell.verdicts = monodromy(cfg, make_scheme(cfg), icfg);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(map.cells.size())));
  std::atomic<std::size_t> cursor{0};
  auto work = [&] {
    for (std::size_t i = cursor++; i < map.cells.size(); i = cursor++) run_cell(map.cells[i]);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return map;
}

}  // namespace iontrap
