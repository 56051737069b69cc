// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "wellsep/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <memory>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "wellsep/delta_analytic.hpp"
#include "wellsep/error.hpp"
#include "wellsep/perturb_deg_multi.hpp"
#include "wellsep/perturb_deg_pair.hpp"
#include "wellsep/perturb_nondeg.hpp"

namespace wellsep {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::array<const char*, 10> kColumns = {"parameters",   "method",      "branch",
                                                  "energy",       "shift_order1", "shift_order2",
                                                  "exact_energy", "abs_error",   "stretching_factor",
                                                  "wall_time"};

[[noreturn]] void bad_config(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

// --- strict JSON helpers -------------------------------------------------

void only_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) bad_config(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      bad_config("unknown key '" + key + "' in " + where);
  }
}

double number(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) bad_config(where + "." + key + " is required");
  if (!it->is_number()) bad_config(where + "." + key + " must be a number");
  return it->get<double>();
}

double number_or(const Json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

int integer(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) bad_config(where + "." + key + " is required");
  if (!it->is_number_integer()) bad_config(where + "." + key + " must be an integer");
  return it->get<int>();
}

std::string text(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) bad_config(where + "." + key + " is required");
  if (!it->is_string()) bad_config(where + "." + key + " must be a string");
  return it->get<std::string>();
}

Potential parse_potential(const Json& j, const std::string& where) {
  if (!j.is_object()) bad_config(where + " must be an object");
  const std::string kind = j.contains("kind") ? text(j, "kind", where) : "delta";
  if (kind == "delta") {
    only_keys(j, where, {"kind", "strength", "center"});
    return Potential::delta(number(j, "strength", where), number(j, "center", where));
  }
  if (kind == "sampled") {
    only_keys(j, where, {"kind", "strength", "center", "lo", "hi", "values"});
    SampledProfile p;
    p.lo = number(j, "lo", where);
    p.hi = number(j, "hi", where);
    const auto it = j.find("values");
    if (it == j.end() || !it->is_array()) bad_config(where + ".values must be an array");
    for (const auto& v : *it) {
      if (!v.is_number()) bad_config(where + ".values must hold numbers");
      p.values.push_back(v.get<double>());
    }
    return Potential::sampled(number(j, "strength", where), number(j, "center", where), std::move(p));
  }
  bad_config(where + ".kind must be 'delta' or 'sampled'");
}

// --- per-point evaluation ------------------------------------------------

struct Point {
  ExperimentConfig cfg;
  bool deltas = false;
  std::shared_ptr<const LocalSpectrum> s1;
  std::shared_ptr<const LocalSpectrum> s2;

  explicit Point(const ExperimentConfig& c) : cfg(c) {
    const auto& [p0, p1] = cfg.potentials;
    deltas = p0.is_delta() && p1.is_delta() && p0.strength > 0.0 && p1.strength > 0.0;
    if (deltas) {
      s1 = delta_local_spectrum(p0.strength, p0.center, cfg.units);
      s2 = delta_local_spectrum(p1.strength, p1.center, cfg.units);
    }
  }

  double separation() const { return cfg.potentials[1].center - cfg.potentials[0].center; }
  double eps() const { return s1->bound.front().energy; }  // internal
  double user(double e) const { return cfg.units.energy_to_user(e); }

  void need_spectra(Method m) const {
    if (!deltas)
      throw Error(ErrorCode::InvalidArgument,
                  std::string("method ") + to_string(m) +
                      " needs two attractive delta wells (no local spectrum for other shapes)");
  }

  bool degenerate() const {
    if (!deltas) return false;
    const double u = s2->bound.front().energy;
    return std::abs(eps() - u) < ExperimentConfig::kAutoDegeneracyGap * std::abs(eps());
  }

  double stretching() const {
    if (!deltas) return 0.0;
    return std::exp(-std::sqrt(2.0 * std::abs(eps())) * std::abs(separation()));
  }

  DeltaPairConfig pair_config() const {
    DeltaPairConfig d;
    d.gamma1 = cfg.potentials[0].strength;
    d.gamma2 = cfg.potentials[1].strength;
    d.separation_L = std::abs(separation());
    d.units = cfg.units;
    return d;
  }

  ReportRow base(Method m) const {
    ReportRow r;
    r.parameters = {{"gamma1", cfg.potentials[0].strength},
                    {"gamma2", cfg.potentials[1].strength},
                    {"separation", separation()}};
    r.method = to_string(m);
    r.stretching_factor = stretching();
    return r;
  }

  NondegInput nondeg_input() const {
    NondegInput in;
    in.reference_state = s1->bound.front();
    in.spectrum1 = s1;
    in.spectrum2 = s2;
    in.v1 = s1->potential;
    in.v2 = s2->potential;
    in.order = cfg.order;
    in.q_spec = cfg.quadrature;
    in.degeneracy_gap = ExperimentConfig::kAutoDegeneracyGap;
    return in;
  }
};

void attach_exact(ReportRow& r, std::optional<double> exact) {
  r.exact_energy = exact;
  if (exact) r.abs_error = std::abs(r.energy - *exact);
}

// Exact energies matched to rows: the root nearest eps_k when there is no
// degeneracy, else {plus: upper root, minus: lower root}.
std::optional<double> exact_nearest(const Point& p) {
  const PairEnergyRoots roots = exact_pair_energies(p.pair_config());
  const double e = p.user(p.eps());
  return *std::min_element(roots.energies.begin(), roots.energies.end(),
                           [e](double a, double b) { return std::abs(a - e) < std::abs(b - e); });
}

std::array<std::optional<double>, 2> exact_branches(const Point& p) {
  const PairEnergyRoots roots = exact_pair_energies(p.pair_config());
  if (roots.count == 2) return {roots.energies[1], roots.energies[0]};
  return {std::nullopt, roots.energies[0]};
}

std::vector<ReportRow> two_branch_rows(const Point& p, Method m, std::array<double, 2> d1,
                                       std::array<std::optional<double>, 2> d2) {
  const auto exact = exact_branches(p);
  std::vector<ReportRow> rows;
  for (int i = 0; i < 2; ++i) {
    ReportRow r = p.base(m);
    r.branch = i == 0 ? "plus" : "minus";
    r.shift_order1 = p.user(d1[i]);
    double e = p.eps() + d1[i];
    if (d2[i]) {
      r.shift_order2 = p.user(*d2[i]);
      e += *d2[i];
    }
    r.energy = p.user(e);
    attach_exact(r, exact[i]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ReportRow> run_nondegenerate(const Point& p) {
  p.need_spectra(Method::Nondegenerate);
  const NondegInput in = p.nondeg_input();
  const PerturbationResult r1 = first_order(in);
  ReportRow r = p.base(Method::Nondegenerate);
  r.shift_order1 = p.user(r1.energy_shift);
  double shift = r1.energy_shift;
  if (p.cfg.order == 2) {
    const PerturbationResult r2 = second_order(in, r1);
    r.shift_order2 = p.user(r2.energy_shift - r1.energy_shift);
    shift = r2.energy_shift;
  }
  r.energy = p.user(p.eps() + shift);
  attach_exact(r, exact_nearest(p));
  return {r};
}

std::vector<ReportRow> run_pair(const Point& p) {
  p.need_spectra(Method::DegeneratePair);
  const BoundState& k = p.s1->bound.front();
  const BoundState& kb = p.s2->bound.front();
  const Potential& v1 = p.s1->potential;
  const Potential& v2 = p.s2->potential;
  const PairBlock block = pair_block(k, kb, v1, v2, p.cfg.quadrature);
  PairSolution sol = leading_mixing(block);
  if (p.cfg.order == 2) {
    const GreenOperator g1p(p.s1, k.energy, {k.label}, p.cfg.quadrature);
    const GreenOperator g2p(p.s2, k.energy, {kb.label}, p.cfg.quadrature);
    sol = pair_second_order(block, sol, pair_sandwiches(g1p, g2p, v1, v2, k, kb));
  }
  return two_branch_rows(p, Method::DegeneratePair, {sol.plus().dE1, sol.minus().dE1},
                         {sol.plus().dE2, sol.minus().dE2});
}

std::vector<ReportRow> run_multi(const Point& p) {
  p.need_spectra(Method::DegenerateMulti);
  const std::vector<BoundState> s1 = p.s1->bound;
  const std::vector<BoundState> s2 = p.s2->bound;
  const Potential& v1 = p.s1->potential;
  const Potential& v2 = p.s2->potential;
  const MultiBlock block = build_blocks(s1, s2, v1, v2, p.cfg.quadrature);
  MOSolution sol = mo_eigensolve(block);
  if (p.cfg.order == 2) {
    std::vector<std::string> ex1, ex2;
    for (const auto& b : s1) ex1.push_back(b.label);
    for (const auto& b : s2) ex2.push_back(b.label);
    const GreenOperator g1p(p.s1, p.eps(), ex1, p.cfg.quadrature);
    const GreenOperator g2p(p.s2, p.eps(), ex2, p.cfg.quadrature);
    sol = multi_second_order(block, sol, multi_sandwiches(g1p, g2p, v1, v2, s1, s2));
  }
  const PairedMode& m = sol.paired.front();
  return two_branch_rows(p, Method::DegenerateMulti, {m.lambda, -m.lambda}, {m.dE2, m.dE2});
}

std::vector<ReportRow> run_naive(const Point& p) {
  p.need_spectra(Method::Naive);
  const NaiveShifts s = naive_shifts(p.nondeg_input());
  ReportRow r = p.base(Method::Naive);
  r.shift_order1 = p.user(s.e1);
  double e = p.eps() + s.e1;
  if (p.cfg.order == 2) {
    r.shift_order2 = p.user(s.e2);
    e += s.e2;
  }
  r.energy = p.user(e);
  attach_exact(r, exact_nearest(p));
  return {r};
}

std::vector<ReportRow> run_exact(const Point& p) {
  p.need_spectra(Method::Exact);
  if (p.degenerate()) {
    const auto ex = exact_branches(p);
    std::vector<ReportRow> rows;
    for (int i = 0; i < 2; ++i) {
      if (!ex[i]) continue;
      ReportRow r = p.base(Method::Exact);
      r.branch = i == 0 ? "plus" : "minus";
      r.energy = *ex[i];
      attach_exact(r, ex[i]);
      rows.push_back(std::move(r));
    }
    return rows;
  }
  ReportRow r = p.base(Method::Exact);
  r.energy = *exact_nearest(p);
  attach_exact(r, r.energy);
  return {r};
}

GridSpec default_grid(const Point& p) {
  const auto& [p0, p1] = p.cfg.potentials;
  const double c[2] = {p0.center, p1.center};
  double g_min = 0.0;
  double g_max = 0.0;
  for (const auto& v : p.cfg.potentials) {
    const double g = p.cfg.units.strength_to_internal(v.strength);
    if (v.is_delta() && g > 0.0) {
      g_min = g_min == 0.0 ? g : std::min(g_min, g);
      g_max = std::max(g_max, g);
    }
  }
  if (g_min == 0.0) {
    // Sampled shapes: cover their support with a generous pad.
    const double lo = std::min(p0.support().lo, p1.support().lo);
    const double hi = std::max(p0.support().hi, p1.support().hi);
    GridSpec g;
    g.x_min = lo - 20.0;
    g.x_max = hi + 20.0;
    g.n_points = static_cast<int>((g.x_max - g.x_min) / 0.01);
    return g;
  }
  return aligned_grid(c, 16.0 / g_min, 0.02 / g_max);
}

std::vector<ReportRow> run_oracle(const Point& p) {
  const GridSpec grid = p.cfg.grid ? *p.cfg.grid : default_grid(p);
  const OracleResult res = grid_diagonalize_extrapolated(p.cfg.potentials, p.cfg.units, grid, 2);
  const auto& vals = res.richardson_estimate->values;
  if (p.deltas && p.degenerate()) {
    const auto ex = exact_branches(p);
    std::vector<ReportRow> rows;
    for (int i = 0; i < 2; ++i) {
      ReportRow r = p.base(Method::Oracle);
      r.branch = i == 0 ? "plus" : "minus";
      r.energy = vals[i == 0 ? 1 : 0];
      attach_exact(r, ex[i]);
      rows.push_back(std::move(r));
    }
    return rows;
  }
  ReportRow r = p.base(Method::Oracle);
  if (p.deltas) {
    const double e = p.user(p.eps());
    r.energy = std::abs(vals[0] - e) <= std::abs(vals[1] - e) ? vals[0] : vals[1];
    attach_exact(r, exact_nearest(p));
  } else {
    r.energy = vals[0];
    const double e = p.cfg.units.energy_to_internal(vals[0]);
    r.stretching_factor = e < 0.0 ? std::exp(-std::sqrt(-2.0 * e) * std::abs(p.separation())) : 0.0;
  }
  return {r};
}

std::vector<ReportRow> evaluate(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const Point p(cfg);
  const Method m = resolve_method(cfg);
  std::vector<ReportRow> rows;
  switch (m) {
    case Method::Nondegenerate: rows = run_nondegenerate(p); break;
    case Method::DegeneratePair: rows = run_pair(p); break;
    case Method::DegenerateMulti: rows = run_multi(p); break;
    case Method::Naive: rows = run_naive(p); break;
    case Method::Exact: rows = run_exact(p); break;
    case Method::Oracle: rows = run_oracle(p); break;
    case Method::Auto: break;
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (auto& r : rows) r.wall_time = dt;
  return rows;
}

ExperimentConfig at_sweep_point(const ExperimentConfig& cfg, double value) {
  ExperimentConfig c = cfg;
  c.sweep.reset();
  Potential& p1 = c.potentials[1];
  if (cfg.sweep->parameter == SweepParameter::Separation) {
    const double dir = p1.center < c.potentials[0].center ? -1.0 : 1.0;
    p1.center = c.potentials[0].center + dir * value;
  } else {
    p1.strength = value;
  }
  return c;
}

std::string strip_code(const char* what) {
  const std::string s(what);
  const auto pos = s.find(": ");
  return pos == std::string::npos ? s : s.substr(pos + 2);
}

// --- output --------------------------------------------------------------

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string json_num(std::optional<double> v) {
  return v && std::isfinite(*v) ? num(*v) : "null";
}

std::string json_str(const std::string& s) { return s.empty() ? "null" : Json(s).dump(); }

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

std::string csv_num(std::optional<double> v) { return v ? num(*v) : ""; }

std::optional<double> opt_number(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

}  // namespace

Method parse_method(const std::string& name) {
  static const std::pair<const char*, Method> kNames[] = {
      {"auto", Method::Auto},     {"nondegenerate", Method::Nondegenerate},
      {"degenerate_pair", Method::DegeneratePair}, {"degenerate_multi", Method::DegenerateMulti},
      {"exact", Method::Exact},   {"oracle", Method::Oracle},
      {"naive", Method::Naive}};
  for (const auto& [n, m] : kNames)
    if (name == n) return m;
  bad_config("unknown method '" + name + "'");
}

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::Auto: return "auto";
    case Method::Nondegenerate: return "nondegenerate";
    case Method::DegeneratePair: return "degenerate_pair";
    case Method::DegenerateMulti: return "degenerate_multi";
    case Method::Exact: return "exact";
    case Method::Oracle: return "oracle";
    case Method::Naive: return "naive";
  }
  return "?";
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  bad_config("output format must be 'csv' or 'json', got '" + name + "'");
}

const char* to_string(OutputFormat f) noexcept { return f == OutputFormat::Csv ? "csv" : "json"; }

std::vector<double> SweepSpec::values() const {
  std::vector<double> v;
  if (steps == 1) return {from};
  for (int i = 0; i < steps; ++i) v.push_back(i == steps - 1 ? to : from + (to - from) * i / (steps - 1));
  return v;
}

void ExperimentConfig::validate() const {
  try {
    units.validate();
    for (const auto& p : potentials) p.validate();
    quadrature.validate();
    if (grid) grid->validate();
  } catch (const Error& e) {
    bad_config(strip_code(e.what()));
  }
  if (order != 1 && order != 2) bad_config("order must be 1 or 2");
  for (const auto& p : potentials)
    if (!(p.strength > 0.0)) bad_config("potential strengths must be positive");
  if (sweep) {
    if (!(sweep->from > 0.0) || !std::isfinite(sweep->to)) bad_config("sweep range must be positive");
    if (sweep->steps < 1) bad_config("sweep.steps must be >= 1");
    if (sweep->steps > 1 && !(sweep->to > sweep->from)) bad_config("sweep range must be increasing");
  }
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text_in) {
  Json j;
  try {
    j = Json::parse(text_in);
  } catch (const Json::exception& e) {
    bad_config(std::string("malformed JSON: ") + e.what());
  }
  only_keys(j, "config", {"units", "potentials", "method", "order", "sweep", "quadrature", "grid", "output"});
  ExperimentConfig c;
  try {
    if (j.contains("units")) {
      const Json& u = j["units"];
      only_keys(u, "units", {"hbar", "mass"});
      c.units.hbar = number_or(u, "hbar", 1.0, "units");
      c.units.mass = number_or(u, "mass", 1.0, "units");
    }
    const auto pit = j.find("potentials");
    if (pit == j.end() || !pit->is_array() || pit->size() != 2)
      bad_config("potentials must be an array of exactly two entries");
    c.potentials[0] = parse_potential((*pit)[0], "potentials[0]");
    c.potentials[1] = parse_potential((*pit)[1], "potentials[1]");
    if (j.contains("method")) c.method = parse_method(text(j, "method", "config"));
    if (j.contains("order")) c.order = integer(j, "order", "config");
    if (j.contains("sweep")) {
      const Json& s = j["sweep"];
      only_keys(s, "sweep", {"parameter", "from", "to", "steps"});
      SweepSpec sw;
      const std::string par = text(s, "parameter", "sweep");
      if (par == "separation") sw.parameter = SweepParameter::Separation;
      else if (par == "gamma2") sw.parameter = SweepParameter::Gamma2;
      else bad_config("sweep.parameter must be 'separation' or 'gamma2'");
      sw.from = number(s, "from", "sweep");
      sw.to = number(s, "to", "sweep");
      sw.steps = integer(s, "steps", "sweep");
      c.sweep = sw;
    }
    if (j.contains("quadrature")) {
      const Json& q = j["quadrature"];
      only_keys(q, "quadrature", {"abs_tol", "rel_tol", "q_max", "panel_rule", "oscillation_guard", "max_panels"});
      QuadratureSpec& qs = c.quadrature;
      qs.abs_tol = number_or(q, "abs_tol", qs.abs_tol, "quadrature");
      qs.rel_tol = number_or(q, "rel_tol", qs.rel_tol, "quadrature");
      qs.q_max = number_or(q, "q_max", qs.q_max, "quadrature");
      if (q.contains("panel_rule")) qs.panel_rule = parse_panel_rule(text(q, "panel_rule", "quadrature"));
      if (q.contains("oscillation_guard")) {
        if (!q["oscillation_guard"].is_boolean()) bad_config("quadrature.oscillation_guard must be a boolean");
        qs.oscillation_guard = q["oscillation_guard"].get<bool>();
      }
      if (q.contains("max_panels")) qs.max_panels = integer(q, "max_panels", "quadrature");
    }
    if (j.contains("grid")) {
      const Json& g = j["grid"];
      only_keys(g, "grid", {"x_min", "x_max", "n_points", "boundary"});
      if (g.contains("boundary") && text(g, "boundary", "grid") != "dirichlet")
        bad_config("grid.boundary must be 'dirichlet'");
      GridSpec gs;
      gs.x_min = number(g, "x_min", "grid");
      gs.x_max = number(g, "x_max", "grid");
      gs.n_points = integer(g, "n_points", "grid");
      c.grid = gs;
    }
    if (j.contains("output")) {
      const Json& o = j["output"];
      only_keys(o, "output", {"format", "path"});
      if (o.contains("format")) c.output.format = parse_format(text(o, "format", "output"));
      if (o.contains("path")) c.output.path = text(o, "path", "output");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    bad_config(strip_code(e.what()));
  } catch (const Json::exception& e) {
    bad_config(e.what());
  }
  c.validate();
  return c;
}

const std::array<const char*, 10>& report_columns() { return kColumns; }

Method resolve_method(const ExperimentConfig& config) {
  if (config.method != Method::Auto) return config.method;
  const Point p(config);
  p.need_spectra(Method::Auto);
  return p.degenerate() ? Method::DegeneratePair : Method::Nondegenerate;
}

std::vector<ReportRow> run(const ExperimentConfig& config, int threads) {
  config.validate();
  std::vector<ExperimentConfig> points;
  std::vector<double> values;
  if (config.sweep) {
    values = config.sweep->values();
    for (double v : values) points.push_back(at_sweep_point(config, v));
  } else {
    points.push_back(config);
  }

  const std::size_t n = points.size();
  std::vector<std::vector<ReportRow>> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = evaluate(points[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned hw = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
  const std::size_t nthreads = std::min<std::size_t>(hw, n);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    const std::string where =
        config.sweep ? fmt::format("sweep point {} ({} = {})", i,
                                   config.sweep->parameter == SweepParameter::Separation ? "separation" : "gamma2",
                                   values[i])
                     : std::string("experiment");
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw Error(e.code(), where + ": " + strip_code(e.what()));
    }
  }
  std::vector<ReportRow> rows;
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(rows));
  return rows;
}

std::string format_rows(const std::vector<ReportRow>& rows, OutputFormat format) {
  std::string out;
  if (format == OutputFormat::Csv) {
    for (std::size_t i = 0; i < kColumns.size(); ++i) out += (i ? "," : "") + std::string(kColumns[i]);
    out += "\r\n";
    for (const auto& r : rows) {
      std::string params;
      for (const auto& [k, v] : r.parameters) params += (params.empty() ? "" : ";") + k + "=" + num(v);
      const std::string cells[] = {csv_cell(params),        csv_cell(r.method),       csv_cell(r.branch),
                                   num(r.energy),           csv_num(r.shift_order1),  csv_num(r.shift_order2),
                                   csv_num(r.exact_energy), csv_num(r.abs_error),     num(r.stretching_factor),
                                   csv_num(r.wall_time)};
      for (std::size_t i = 0; i < std::size(cells); ++i) out += (i ? "," : "") + cells[i];
      out += "\r\n";
    }
    return out;
  }
  out = "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ReportRow& r = rows[i];
    std::string params;
    for (const auto& [k, v] : r.parameters) params += (params.empty() ? "" : ", ") + Json(k).dump() + ": " + num(v);
    out += i ? ",\n " : "\n ";
    out += fmt::format(
        "{{\"parameters\": {{{}}}, \"method\": {}, \"branch\": {}, \"energy\": {}, \"shift_order1\": {}, "
        "\"shift_order2\": {}, \"exact_energy\": {}, \"abs_error\": {}, \"stretching_factor\": {}, "
        "\"wall_time\": null}}",
        params, json_str(r.method), json_str(r.branch), json_num(r.energy), json_num(r.shift_order1),
        json_num(r.shift_order2), json_num(r.exact_energy), json_num(r.abs_error), json_num(r.stretching_factor));
  }
  out += rows.empty() ? "]\n" : "\n]\n";
  return out;
}

std::vector<ReportRow> parse_rows_json(const std::string& text_in) {
  const Json j = Json::parse(text_in);
  std::vector<ReportRow> rows;
  for (const auto& o : j) {
    ReportRow r;
    for (const auto& [k, v] : o.at("parameters").items()) r.parameters.emplace_back(k, v.get<double>());
    r.method = o.at("method").is_null() ? "" : o.at("method").get<std::string>();
    r.branch = o.at("branch").is_null() ? "" : o.at("branch").get<std::string>();
    r.energy = o.at("energy").get<double>();
    r.shift_order1 = opt_number(o, "shift_order1");
    r.shift_order2 = opt_number(o, "shift_order2");
    r.exact_energy = opt_number(o, "exact_energy");
    r.abs_error = opt_number(o, "abs_error");
    r.stretching_factor = o.at("stretching_factor").get<double>();
    r.wall_time = opt_number(o, "wall_time");
    rows.push_back(std::move(r));
  }
  return rows;
}

void emit(const std::vector<ReportRow>& rows, OutputFormat format, const std::string& path) {
  const std::string body = format_rows(rows, format);
  if (path.empty()) {
    std::cout << body << std::flush;
    if (!std::cout) throw Error(ErrorCode::IoError, "failed writing to standard output");
    return;
  }
  auto write = [](const std::string& p, const std::string& data) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::IoError, "cannot open '" + p + "' for writing");
    f << data;
    f.close();
    if (!f) throw Error(ErrorCode::IoError, "failed writing '" + p + "'");
  };
  write(path, body);
  if (format == OutputFormat::Json) {
    std::string meta = "{\"rows\": " + std::to_string(rows.size()) + ", \"wall_time\": [";
    for (std::size_t i = 0; i < rows.size(); ++i) meta += (i ? ", " : "") + json_num(rows[i].wall_time);
    meta += "]}\n";
    write(path + ".meta.json", meta);
  }
}

}  // namespace wellsep
