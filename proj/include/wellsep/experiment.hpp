// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WELLSEP_EXPERIMENT_HPP
#define WELLSEP_EXPERIMENT_HPP

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wellsep/oracle.hpp"
#include "wellsep/quadrature.hpp"
#include "wellsep/spectrum.hpp"
#include "wellsep/units.hpp"

namespace wellsep {

enum class Method { Auto, Nondegenerate, DegeneratePair, DegenerateMulti, Exact, Oracle, Naive };
enum class OutputFormat { Csv, Json };
enum class SweepParameter { Separation, Gamma2 };

Method parse_method(const std::string& name);
const char* to_string(Method m) noexcept;
OutputFormat parse_format(const std::string& name);
const char* to_string(OutputFormat f) noexcept;

struct SweepSpec {
  SweepParameter parameter = SweepParameter::Separation;
  double from = 0.0;
  double to = 0.0;
  int steps = 1;

  std::vector<double> values() const;
};

struct OutputSpec {
  OutputFormat format = OutputFormat::Csv;
  std::string path;  ///< empty: standard output
};

/// One experiment: two potentials in user units, potentials[0] hosting the
/// reference state. Relative gap under which auto routes to the degenerate
/// branch: |eps_k - u| < kAutoDegeneracyGap |eps_k|.
struct ExperimentConfig {
  Units units;
  std::array<Potential, 2> potentials{Potential::delta(2.0, 0.0), Potential::delta(1.0, 3.0)};
  Method method = Method::Auto;
  int order = 1;
  std::optional<SweepSpec> sweep;
  QuadratureSpec quadrature;
  std::optional<GridSpec> grid;
  OutputSpec output;

  static constexpr double kAutoDegeneracyGap = 0.1;

  /// Throws Error(ConfigInvalid) on any schema or value problem.
  void validate() const;
  /// Strict parse: unknown keys are rejected with ConfigInvalid.
  static ExperimentConfig from_json(const std::string& text);
};

struct ReportRow {
  std::vector<std::pair<std::string, double>> parameters;  ///< gamma1, gamma2, separation
  std::string method;  ///< resolved method (auto never appears)
  std::string branch;  ///< "plus", "minus" or empty
  double energy = 0.0;
  std::optional<double> shift_order1;
  std::optional<double> shift_order2;
  std::optional<double> exact_energy;
  std::optional<double> abs_error;
  double stretching_factor = 0.0;
  /// Seconds spent on the sweep point. Kept out of the JSON data (written
  /// as null there and to the metadata sidecar instead).
  std::optional<double> wall_time;

  bool operator==(const ReportRow&) const = default;
};

/// Field names in output order.
const std::array<const char*, 10>& report_columns();

/// Method actually used for one configuration (auto resolved).
Method resolve_method(const ExperimentConfig& config);

/// One row per (sweep point x branch), in sweep order. Sweep points run on
/// up to `threads` workers (0: hardware concurrency). Library failures are
/// rethrown with the failing sweep point in the message.
std::vector<ReportRow> run(const ExperimentConfig& config, int threads = 0);

std::string format_rows(const std::vector<ReportRow>& rows, OutputFormat format);
std::vector<ReportRow> parse_rows_json(const std::string& text);

/// Writes the table to `path` (standard output when empty). For JSON files a
/// sidecar `<path>.meta.json` carries the wall times. Throws IoError.
void emit(const std::vector<ReportRow>& rows, OutputFormat format, const std::string& path);

}  // namespace wellsep

#endif  // WELLSEP_EXPERIMENT_HPP
