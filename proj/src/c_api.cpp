// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "wellsep/wellsep.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "wellsep/delta_analytic.hpp"
#include "wellsep/error.hpp"
#include "wellsep/experiment.hpp"

struct wellsep_experiment {
  wellsep::ExperimentConfig config;
};

struct wellsep_report {
  std::vector<wellsep::ReportRow> rows;
};

namespace {

thread_local std::string g_last_error;

wellsep_status status_of(wellsep::ErrorCode c) {
  using wellsep::ErrorCode;
  switch (c) {
    case ErrorCode::InvalidArgument: return WELLSEP_ERR_INVALID_ARGUMENT;
    case ErrorCode::InvalidStrength: return WELLSEP_ERR_INVALID_STRENGTH;
    case ErrorCode::NonConvergent: return WELLSEP_ERR_NON_CONVERGENT;
    case ErrorCode::RootBracketingFailed: return WELLSEP_ERR_ROOT_BRACKETING;
    case ErrorCode::DegenerateStrengths: return WELLSEP_ERR_DEGENERATE_STRENGTHS;
    case ErrorCode::EnergyCollision: return WELLSEP_ERR_ENERGY_COLLISION;
    case ErrorCode::DegeneracyDetected: return WELLSEP_ERR_DEGENERACY_DETECTED;
    case ErrorCode::ZeroCoupling: return WELLSEP_ERR_ZERO_COUPLING;
    case ErrorCode::NotDegenerate: return WELLSEP_ERR_NOT_DEGENERATE;
    case ErrorCode::ShapeMismatch: return WELLSEP_ERR_SHAPE_MISMATCH;
    case ErrorCode::UnresolvedDegeneracy: return WELLSEP_ERR_UNRESOLVED_DEGENERACY;
    case ErrorCode::ConvergenceFailure: return WELLSEP_ERR_CONVERGENCE_FAILURE;
    case ErrorCode::GridMismatch: return WELLSEP_ERR_GRID_MISMATCH;
    case ErrorCode::ConfigInvalid: return WELLSEP_ERR_CONFIG_INVALID;
    case ErrorCode::IoError: return WELLSEP_ERR_IO;
  }
  return WELLSEP_ERR_INTERNAL;
}

template <class F>
wellsep_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return WELLSEP_OK;
  } catch (const wellsep::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return WELLSEP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return WELLSEP_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return WELLSEP_ERR_INTERNAL;
  }
}

wellsep_status null_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return WELLSEP_ERR_INVALID_ARGUMENT;
}

double or_nan(const std::optional<double>& v) { return v ? *v : std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

extern "C" {

const char* wellsep_status_string(wellsep_status status) {
  switch (status) {
    case WELLSEP_OK: return "ok";
    case WELLSEP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case WELLSEP_ERR_INVALID_STRENGTH: return "invalid strength";
    case WELLSEP_ERR_NON_CONVERGENT: return "quadrature did not converge";
    case WELLSEP_ERR_ROOT_BRACKETING: return "root bracketing failed";
    case WELLSEP_ERR_DEGENERATE_STRENGTHS: return "degenerate strengths";
    case WELLSEP_ERR_ENERGY_COLLISION: return "energy collision";
    case WELLSEP_ERR_DEGENERACY_DETECTED: return "degeneracy detected";
    case WELLSEP_ERR_ZERO_COUPLING: return "zero coupling";
    case WELLSEP_ERR_NOT_DEGENERATE: return "not degenerate";
    case WELLSEP_ERR_SHAPE_MISMATCH: return "shape mismatch";
    case WELLSEP_ERR_UNRESOLVED_DEGENERACY: return "unresolved degeneracy";
    case WELLSEP_ERR_CONVERGENCE_FAILURE: return "eigensolver failure";
    case WELLSEP_ERR_GRID_MISMATCH: return "grid mismatch";
    case WELLSEP_ERR_CONFIG_INVALID: return "invalid configuration";
    case WELLSEP_ERR_IO: return "i/o error";
    case WELLSEP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* wellsep_last_error(void) { return g_last_error.c_str(); }

wellsep_status wellsep_experiment_from_json(const char* json_text, wellsep_experiment** out) {
  if (!json_text) return null_arg("json_text");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new wellsep_experiment{wellsep::ExperimentConfig::from_json(json_text)}; });
}

wellsep_status wellsep_experiment_from_file(const char* path, wellsep_experiment** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw wellsep::Error(wellsep::ErrorCode::IoError, std::string("cannot read '") + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    *out = new wellsep_experiment{wellsep::ExperimentConfig::from_json(ss.str())};
  });
}

void wellsep_experiment_free(wellsep_experiment* exp) { delete exp; }

wellsep_status wellsep_experiment_set_output(wellsep_experiment* exp, const char* format, const char* path) {
  if (!exp) return null_arg("exp");
  return guarded([&] {
    if (format) exp->config.output.format = wellsep::parse_format(format);
    if (path) exp->config.output.path = path;
  });
}

const char* wellsep_experiment_format(const wellsep_experiment* exp) {
  return exp ? wellsep::to_string(exp->config.output.format) : "";
}

const char* wellsep_experiment_path(const wellsep_experiment* exp) {
  return exp ? exp->config.output.path.c_str() : "";
}

wellsep_status wellsep_run(const wellsep_experiment* exp, int threads, wellsep_report** out) {
  if (!exp) return null_arg("exp");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new wellsep_report{wellsep::run(exp->config, threads > 0 ? threads : 0)}; });
}

void wellsep_report_free(wellsep_report* report) { delete report; }

size_t wellsep_report_size(const wellsep_report* report) { return report ? report->rows.size() : 0; }

wellsep_status wellsep_report_row(const wellsep_report* report, size_t index, wellsep_row* out) {
  if (!report) return null_arg("report");
  if (!out) return null_arg("out");
  if (index >= report->rows.size()) {
    g_last_error = "row index out of range";
    return WELLSEP_ERR_INVALID_ARGUMENT;
  }
  const wellsep::ReportRow& r = report->rows[index];
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out->gamma1 = out->gamma2 = out->separation = nan;
  for (const auto& [k, v] : r.parameters) {
    if (k == "gamma1") out->gamma1 = v;
    else if (k == "gamma2") out->gamma2 = v;
    else if (k == "separation") out->separation = v;
  }
  out->method = r.method.c_str();
  out->branch = r.branch.c_str();
  out->energy = r.energy;
  out->shift_order1 = or_nan(r.shift_order1);
  out->shift_order2 = or_nan(r.shift_order2);
  out->exact_energy = or_nan(r.exact_energy);
  out->abs_error = or_nan(r.abs_error);
  out->stretching_factor = r.stretching_factor;
  out->wall_time = or_nan(r.wall_time);
  return WELLSEP_OK;
}

wellsep_status wellsep_report_emit(const wellsep_report* report, const wellsep_experiment* exp) {
  if (!report) return null_arg("report");
  if (!exp) return null_arg("exp");
  return guarded([&] { wellsep::emit(report->rows, exp->config.output.format, exp->config.output.path); });
}

wellsep_status wellsep_report_format(const wellsep_report* report, const char* format, char** out) {
  if (!report) return null_arg("report");
  if (!format) return null_arg("format");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const std::string s = wellsep::format_rows(report->rows, wellsep::parse_format(format));
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
  });
}

void wellsep_string_free(char* s) { delete[] s; }

wellsep_status wellsep_delta_pair_energies(double gamma1, double gamma2, double separation, double hbar,
                                           double mass, double* energies, int* count) {
  if (!energies) return null_arg("energies");
  if (!count) return null_arg("count");
  return guarded([&] {
    wellsep::DeltaPairConfig c;
    c.gamma1 = gamma1;
    c.gamma2 = gamma2;
    c.separation_L = separation;
    c.units = wellsep::Units{hbar, mass};
    const auto roots = wellsep::exact_pair_energies(c);
    *count = roots.count;
    for (int i = 0; i < roots.count; ++i) energies[i] = roots.energies[static_cast<std::size_t>(i)];
  });
}

}  // extern "C"
