/* Copyright 2026 The wellsep Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to libwellsep. Every call returns a wellsep_status; on failure
 * wellsep_last_error() holds a message for the calling thread. Handles are
 * opaque and owned by the caller until passed to the matching _free.
 */

#ifndef WELLSEP_H
#define WELLSEP_H

#include <stddef.h>

#if defined(_WIN32)
#define WELLSEP_API __declspec(dllexport)
#else
#define WELLSEP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wellsep_status {
  WELLSEP_OK = 0,
  WELLSEP_ERR_INVALID_ARGUMENT,
  WELLSEP_ERR_INVALID_STRENGTH,
  WELLSEP_ERR_NON_CONVERGENT,
  WELLSEP_ERR_ROOT_BRACKETING,
  WELLSEP_ERR_DEGENERATE_STRENGTHS,
  WELLSEP_ERR_ENERGY_COLLISION,
  WELLSEP_ERR_DEGENERACY_DETECTED,
  WELLSEP_ERR_ZERO_COUPLING,
  WELLSEP_ERR_NOT_DEGENERATE,
  WELLSEP_ERR_SHAPE_MISMATCH,
  WELLSEP_ERR_UNRESOLVED_DEGENERACY,
  WELLSEP_ERR_CONVERGENCE_FAILURE,
  WELLSEP_ERR_GRID_MISMATCH,
  WELLSEP_ERR_CONFIG_INVALID,
  WELLSEP_ERR_IO,
  WELLSEP_ERR_INTERNAL
} wellsep_status;

typedef struct wellsep_experiment wellsep_experiment;
typedef struct wellsep_report wellsep_report;

/* One output row. Optional fields are NaN when absent. Strings point into
 * the report and live as long as it does. */
typedef struct wellsep_row {
  double gamma1;
  double gamma2;
  double separation;
  const char* method;
  const char* branch; /* "" when the method has no branches */
  double energy;
  double shift_order1;
  double shift_order2;
  double exact_energy;
  double abs_error;
  double stretching_factor;
  double wall_time;
} wellsep_row;

WELLSEP_API const char* wellsep_status_string(wellsep_status status);
WELLSEP_API const char* wellsep_last_error(void);

WELLSEP_API wellsep_status wellsep_experiment_from_json(const char* json_text, wellsep_experiment** out);
WELLSEP_API wellsep_status wellsep_experiment_from_file(const char* path, wellsep_experiment** out);
WELLSEP_API void wellsep_experiment_free(wellsep_experiment* exp);

/* format: "csv" or "json" (NULL keeps the configured one); path: NULL keeps
 * the configured one, "" selects standard output. */
WELLSEP_API wellsep_status wellsep_experiment_set_output(wellsep_experiment* exp, const char* format,
                                                         const char* path);
/* Output format and path currently configured. */
WELLSEP_API const char* wellsep_experiment_format(const wellsep_experiment* exp);
WELLSEP_API const char* wellsep_experiment_path(const wellsep_experiment* exp);

/* threads <= 0 uses the hardware concurrency. */
WELLSEP_API wellsep_status wellsep_run(const wellsep_experiment* exp, int threads, wellsep_report** out);
WELLSEP_API void wellsep_report_free(wellsep_report* report);

WELLSEP_API size_t wellsep_report_size(const wellsep_report* report);
WELLSEP_API wellsep_status wellsep_report_row(const wellsep_report* report, size_t index, wellsep_row* out);

/* Writes to the experiment's configured output (format and path). */
WELLSEP_API wellsep_status wellsep_report_emit(const wellsep_report* report, const wellsep_experiment* exp);

/* Formatted table; release with wellsep_string_free. */
WELLSEP_API wellsep_status wellsep_report_format(const wellsep_report* report, const char* format, char** out);
WELLSEP_API void wellsep_string_free(char* s);

/* Bound-state energies of two delta wells -gamma1 delta(x) - gamma2
 * delta(x - L), ascending, user units. energies must hold 2 doubles. */
WELLSEP_API wellsep_status wellsep_delta_pair_energies(double gamma1, double gamma2, double separation,
                                                       double hbar, double mass, double* energies, int* count);

#ifdef __cplusplus
}
#endif

#endif /* WELLSEP_H */
