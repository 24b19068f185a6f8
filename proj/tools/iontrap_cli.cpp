// iontrap command line: simulate | scan | verify | dequantize

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "iontrap/iontrap.h"

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kConfigError = 2, kRuntimeError = 3 };

int report(itp_status status) {
  std::cerr << "error: " << itp_status_name(status) << ": " << itp_last_error() << "\n";
  if (status == ITP_ERR_CONFIG || status == ITP_ERR_IO) return kConfigError;
  return kRuntimeError;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Owns a parsed run; returns nullptr after printing the error.
struct RunHandle {
  itp_run* run = nullptr;
  ~RunHandle() { itp_run_free(run); }
};

int load(const std::string& path, RunHandle& handle) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read config " << path << "\n";
    return kConfigError;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  const itp_status st = itp_run_from_json(ss.str().c_str(), &handle.run);
  return st == ITP_OK ? kOk : report(st);
}

std::string output_path(const std::string& flag, const itp_run* run) {
  if (!flag.empty()) return flag;
  const std::string from_config = itp_run_output_path(run);
  return from_config.empty() ? "-" : from_config;
}

unsigned default_threads() {
  if (const char* env = std::getenv("IONTRAP_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical coherent-state dynamics of a trapped ion"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("iontrap ") + itp_version());

  std::string config, out;
  unsigned threads = default_threads();
  std::uint64_t seed = 12345;
  std::vector<double> za, zr;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "run configuration (JSON, SI units)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output path ('-' for stdout); defaults to output.path");
    sub->add_option("--threads", threads, "worker threads (env IONTRAP_THREADS)");
    sub->add_option("--seed", seed, "seed for randomized verification points");
  };

  auto* simulate = app.add_subcommand("simulate", "integrate the coherent-state equations of motion");
  auto* scan = app.add_subcommand("scan", "Floquet stability map over a (U0, V0) grid");
  auto* verify = app.add_subcommand("verify", "cross-check against the truncated Fock-space oracle");
  auto* dequantize = app.add_subcommand("dequantize", "print Husimi coefficients and H~ vs the oracle");
  for (auto* sub : {simulate, scan, verify, dequantize}) add_common(sub);
  dequantize->add_option("--z-a", za, "axial disk point: RE IM")->expected(2);
  dequantize->add_option("--z-r", zr, "radial disk point: RE IM")->expected(2);

  CLI11_PARSE(app, argc, argv);

  RunHandle h;
  if (const int rc = load(config, h); rc != kOk) return rc;

  if (simulate->parsed()) {
    itp_trajectory* traj = nullptr;
    if (const itp_status st = itp_simulate(h.run, &traj); st != ITP_OK) return report(st);
    const itp_status st = itp_trajectory_write_csv(traj, output_path(out, h.run).c_str(), timestamp().c_str());
    itp_trajectory_free(traj);
    return st == ITP_OK ? kOk : report(st);
  }

  if (scan->parsed()) {
    itp_stability_map* map = nullptr;
    if (const itp_status st = itp_scan(h.run, threads, &map); st != ITP_OK) return report(st);
    const itp_status st = itp_map_write_csv(map, output_path(out, h.run).c_str(), timestamp().c_str());
    itp_map_free(map);
    return st == ITP_OK ? kOk : report(st);
  }

  if (verify->parsed()) {
    char* json = nullptr;
    int passed = 0;
    if (const itp_status st = itp_verify(h.run, seed, &json, &passed); st != ITP_OK) return report(st);
    const std::string path = out.empty() ? "-" : out;
    if (path == "-") {
      std::cout << json << "\n";
    } else {
      std::ofstream os(path, std::ios::binary | std::ios::trunc);
      os << json << "\n";
    }
    itp_string_free(json);
    return passed ? kOk : kCheckFailed;
  }

  double init[4];
  itp_run_initial(h.run, init);
  if (za.size() == 2) init[0] = za[0], init[1] = za[1];
  if (zr.size() == 2) init[2] = zr[0], init[3] = zr[1];
  itp_dequantization d;
  if (const itp_status st = itp_dequantize(h.run, init[0], init[1], init[2], init[3], &d); st != ITP_OK) {
    return report(st);
  }
  const itp_husimi_coefficients& c = d.coefficients;
  std::printf("z_a = (%.17g, %.17g)  z_r = (%.17g, %.17g)\n", init[0], init[1], init[2], init[3]);
  std::printf("omega_c (scheme units) = %.17g\n", d.omega_c_scaled);
  const std::pair<const char*, double> rows[] = {
      {"A_a", c.A_a}, {"A_r", c.A_r}, {"B_a", c.B_a}, {"B_r", c.B_r},
      {"C20", c.C20}, {"C11", c.C11}, {"C02", c.C02}, {"D30", c.D30},
      {"D21", c.D21}, {"D12", c.D12}, {"D03", c.D03}, {"const_term", c.const_term}};
  for (const auto& [name, v] : rows) std::printf("%-12s %.17g\n", name, v);
  std::printf("H~           %.17g\n", d.value);
  std::printf("oracle       %.17g  (N_a = %d, N_r = %d)\n", d.oracle, d.n_axial, d.n_radial);
  std::printf("difference   %.3e\n", d.difference);
  return kOk;
}
