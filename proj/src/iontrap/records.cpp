#include "iontrap/records.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "iontrap/error.hpp"

namespace iontrap {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_header(std::ostream& os, const RunConfig& cfg, std::string_view kind,
                  std::string_view timestamp) {
  const DimensionlessScheme s = make_scheme(cfg.trap);
  const BargmannIndices k = bargmann_indices(cfg.trap);
  os << "# iontrap " << kVersion << " " << kind << "\n";
  os << "# generated: " << timestamp << "\n";
  os << "# config: " << resolved_config_json(cfg) << "\n";
  os << "# scheme: length_scale_m=" << format_double(s.length_scale)
     << " time_scale_s=" << format_double(s.time_scale)
     << " energy_scale_J=" << format_double(s.energy_scale)
     << " omega_c_scaled=" << format_double(scaled_cyclotron_frequency(cfg.trap, s))
     << " k_a=" << format_double(k.k_a) << " k_r=" << format_double(k.k_r) << "\n";
  if (cfg.trap.kind != TrapKind::Penning) {
    const MathieuParameters m = mathieu_parameters(cfg.trap);
    os << "# mathieu: a_z=" << format_double(m.a_z) << " q_z=" << format_double(m.q_z)
       << " a_r=" << format_double(m.a_r) << " q_r=" << format_double(m.q_r) << "\n";
  }
}

}  // namespace

std::vector<TrajectoryRecord> run_simulation(const RunConfig& cfg) {
  const DimensionlessScheme scheme = make_scheme(cfg.trap);
  const SemiclassicalModel model = make_model(cfg.trap, cfg.anharmonic, scheme);
  const double period = reference_period(cfg.trap, scheme);
  const double t_end = cfg.duration_periods * period;
  const double dt = period / static_cast<double>(cfg.output.samples_per_period);

  const std::vector<TrajectoryState> states =
      integrate({0.0, cfg.initial.z_a, cfg.initial.z_r}, t_end, model, cfg.integrator, dt);

  std::vector<TrajectoryRecord> out;
  out.reserve(states.size() / cfg.output.stride + 1);
  for (std::size_t i = 0; i < states.size(); i += cfg.output.stride) {
    const TrajectoryState& s = states[i];
    const XiEta a = xi_eta(s.z_a);
    const XiEta r = xi_eta(s.z_r);
    const double h = husimi_value(model.coefficients(s.t), a, r);
    out.push_back({s.t, s.z_a.real(), s.z_a.imag(), s.z_r.real(), s.z_r.imag(), a.xi, a.eta,
                   r.xi, r.eta, h});
  }
  return out;
}

StabilityMap run_scan(const RunConfig& cfg, unsigned threads) {
  if (!cfg.grid) throw Error(ErrorCode::Config, "config: grid: required for scan");
  return stability_scan(cfg.trap, cfg.grid->U0, cfg.grid->V0, cfg.grid->nU, cfg.grid->nV,
                        cfg.integrator, threads);
}

void write_trajectory_csv(std::ostream& os, const RunConfig& cfg,
                          const std::vector<TrajectoryRecord>& records,
                          std::string_view timestamp) {
  write_header(os, cfg, "trajectory", timestamp);
  os << "# t is scheme time; t_SI = t * time_scale_s\n";
  os << "t,re_z_a,im_z_a,re_z_r,im_z_r,xi_a,eta_a,xi_r,eta_r,H\n";
  for (const TrajectoryRecord& r : records) {
    os << format_double(r.t) << ',' << format_double(r.re_z_a) << ','
       << format_double(r.im_z_a) << ',' << format_double(r.re_z_r) << ','
       << format_double(r.im_z_r) << ',' << format_double(r.xi_a) << ','
       << format_double(r.eta_a) << ',' << format_double(r.xi_r) << ','
       << format_double(r.eta_r) << ',' << format_double(r.H) << '\n';
  }
}

void write_map_csv(std::ostream& os, const RunConfig& cfg, const StabilityMap& map,
                   std::string_view timestamp) {
  write_header(os, cfg, "stability-map", timestamp);
  os << "U0,V0,a_z,q_z,stable_axial,stable_radial,max_abs_multiplier,error\n";
  for (const StabilityCell& c : map.cells) {
    std::string err = c.error;
    std::replace(err.begin(), err.end(), '"', '\'');
    std::replace(err.begin(), err.end(), '\n', ' ');
    const double mu = std::max(c.verdicts.axial.max_abs_multiplier,
                               c.verdicts.radial.max_abs_multiplier);
    os << format_double(c.U0) << ',' << format_double(c.V0) << ',' << format_double(c.a_z)
       << ',' << format_double(c.q_z) << ',' << (c.error.empty() && c.verdicts.axial.stable ? 1 : 0)
       << ',' << (c.error.empty() && c.verdicts.radial.stable ? 1 : 0) << ','
       << format_double(mu) << ',';
    if (!err.empty()) os << '"' << err << '"';
    os << '\n';
  }
}

}  // namespace iontrap
