/*
 * iontrap: semiclassical coherent-state dynamics of a single ion in Paul,
 * Penning and combined quadrupole traps.
 *
 * C interface. All objects are opaque handles owned by the caller and
 * released with the matching *_free function. Every fallible call returns
 * an itp_status; on failure itp_last_error() holds a message for the
 * calling thread until its next API call.
 */
#ifndef IONTRAP_H
#define IONTRAP_H

#include <stddef.h>
#include <stdint.h>

#if defined(ITP_BUILDING)
#define ITP_API __attribute__((visibility("default")))
#else
#define ITP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum itp_status {
  ITP_OK = 0,
  ITP_ERR_INVALID_ARGUMENT = 1,
  ITP_ERR_CONFIG = 2,
  ITP_ERR_DOMAIN = 3,
  ITP_ERR_BOUNDARY_BREACH = 4,
  ITP_ERR_STEP_UNDERFLOW = 5,
  ITP_ERR_TRUNCATION = 6,
  ITP_ERR_DIMENSION_CAP = 7,
  ITP_ERR_NORM_DRIFT = 8,
  ITP_ERR_IO = 9,
  ITP_ERR_INTERNAL = 100
} itp_status;

typedef struct itp_run itp_run;
typedef struct itp_trajectory itp_trajectory;
typedef struct itp_stability_map itp_stability_map;

/* Internal units: x = length_scale x~, t = time_scale tau, E = energy_scale E~. */
typedef struct itp_scheme {
  double length_scale;
  double time_scale;
  double energy_scale;
  double omega_c_scaled;
  double k_a;
  double k_r;
  double period; /* reference drive period in scheme time */
} itp_scheme;

/* One trajectory sample; t in scheme time. */
typedef struct itp_trajectory_row {
  double t;
  double re_z_a, im_z_a;
  double re_z_r, im_z_r;
  double xi_a, eta_a;
  double xi_r, eta_r;
  double H;
} itp_trajectory_row;

typedef struct itp_map_cell {
  double U0;
  double V0;
  double a_z;
  double q_z;
  int stable_axial;
  int stable_radial;
  double max_abs_multiplier;
  const char* error; /* empty string on success; owned by the map */
} itp_map_cell;

typedef struct itp_husimi_coefficients {
  double A_a, A_r, B_a, B_r;
  double C20, C11, C02;
  double D30, D21, D12, D03;
  double const_term;
} itp_husimi_coefficients;

typedef struct itp_dequantization {
  itp_husimi_coefficients coefficients;
  double omega_c_scaled;
  double value;
  double oracle;
  double difference;
  int n_axial;
  int n_radial;
} itp_dequantization;

ITP_API const char* itp_version(void);
ITP_API const char* itp_status_name(itp_status status);
ITP_API const char* itp_last_error(void);

/* Parses and validates a JSON run configuration (SI units, strict keys). */
ITP_API itp_status itp_run_from_json(const char* json_text, itp_run** out);
ITP_API void itp_run_free(itp_run* run);

/* Canonical JSON echo of the resolved configuration. Writes at most cap
 * bytes including the terminator; *len receives the full length. */
ITP_API itp_status itp_run_resolved_json(const itp_run* run, char* buf, size_t cap, size_t* len);
ITP_API itp_status itp_run_scheme(const itp_run* run, itp_scheme* out);
/* Initial disk points from the configuration: {Re z_a, Im z_a, Re z_r, Im z_r}. */
ITP_API itp_status itp_run_initial(const itp_run* run, double out[4]);
/* Output path from the configuration, or "" */
ITP_API const char* itp_run_output_path(const itp_run* run);

ITP_API itp_status itp_simulate(const itp_run* run, itp_trajectory** out);
ITP_API size_t itp_trajectory_length(const itp_trajectory* traj);
ITP_API itp_status itp_trajectory_get(const itp_trajectory* traj, size_t i, itp_trajectory_row* row);
/* path "-" writes to stdout. timestamp fills the "# generated:" header line. */
ITP_API itp_status itp_trajectory_write_csv(const itp_trajectory* traj, const char* path,
                                            const char* timestamp);
ITP_API void itp_trajectory_free(itp_trajectory* traj);

ITP_API itp_status itp_scan(const itp_run* run, unsigned threads, itp_stability_map** out);
ITP_API size_t itp_map_size(const itp_stability_map* map);
ITP_API itp_status itp_map_get(const itp_stability_map* map, size_t i, itp_map_cell* cell);
ITP_API itp_status itp_map_write_csv(const itp_stability_map* map, const char* path,
                                     const char* timestamp);
ITP_API void itp_map_free(itp_stability_map* map);

ITP_API itp_status itp_dequantize(const itp_run* run, double za_re, double za_im, double zr_re,
                                  double zr_im, itp_dequantization* out);

/* Runs the oracle cross-checks. *report_json is released with
 * itp_string_free; *passed is 1 when no check failed. */
ITP_API itp_status itp_verify(const itp_run* run, uint64_t seed, char** report_json, int* passed);
ITP_API void itp_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* IONTRAP_H */
