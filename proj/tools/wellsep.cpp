// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

// wellsep: command-line front end over the C interface.

#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wellsep/wellsep.h"

namespace {

enum Exit { kOk = 0, kConfig = 2, kCompute = 3, kIo = 4 };

struct ExpDeleter {
  void operator()(wellsep_experiment* e) const { wellsep_experiment_free(e); }
};
struct ReportDeleter {
  void operator()(wellsep_report* r) const { wellsep_report_free(r); }
};

int fail(int code, wellsep_status s) {
  std::fprintf(stderr, "wellsep: %s: %s\n", wellsep_status_string(s), wellsep_last_error());
  return code;
}

int exit_for(wellsep_status s) {
  if (s == WELLSEP_ERR_CONFIG_INVALID) return kConfig;
  if (s == WELLSEP_ERR_IO) return kIo;
  return kCompute;
}

struct OutputOptions {
  std::string output;
  std::string format;
  int threads = 0;
  bool output_set = false;
};

void add_output_options(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("--output,-o", o.output, "output file (standard output when omitted)");
  cmd->add_option("--format,-f", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads,-j", o.threads, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
}

int execute(wellsep_experiment* raw, const OutputOptions& o) {
  std::unique_ptr<wellsep_experiment, ExpDeleter> exp(raw);
  wellsep_status s = wellsep_experiment_set_output(exp.get(), o.format.empty() ? nullptr : o.format.c_str(),
                                                   o.output_set ? o.output.c_str() : nullptr);
  if (s != WELLSEP_OK) return fail(kConfig, s);
  wellsep_report* rep_raw = nullptr;
  s = wellsep_run(exp.get(), o.threads, &rep_raw);
  if (s != WELLSEP_OK) return fail(exit_for(s), s);
  std::unique_ptr<wellsep_report, ReportDeleter> rep(rep_raw);
  s = wellsep_report_emit(rep.get(), exp.get());
  if (s != WELLSEP_OK) return fail(kIo, s);
  return kOk;
}

int from_json(const nlohmann::json& cfg, const OutputOptions& o) {
  wellsep_experiment* exp = nullptr;
  const wellsep_status s = wellsep_experiment_from_json(cfg.dump().c_str(), &exp);
  if (s != WELLSEP_OK) return fail(kConfig, s);
  return execute(exp, o);
}

nlohmann::json pair_json(double g1, double g2, double L, double hbar, double mass) {
  return {{"units", {{"hbar", hbar}, {"mass", mass}}},
          {"potentials",
           nlohmann::json::array({{{"kind", "delta"}, {"strength", g1}, {"center", 0.0}},
                                  {{"kind", "delta"}, {"strength", g2}, {"center", L}}})}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bound states of two well-separated potentials"};
  app.require_subcommand(1);

  OutputOptions run_out, exact_out, sweep_out;
  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "run an experiment config (JSON)");
  run->add_option("--config,-c", config_path, "experiment config file")->required();
  add_output_options(run, run_out);

  double g1 = 2.0, g2 = 1.0, L = 3.0, hbar = 1.0, mass = 1.0;
  auto add_pair = [&](CLI::App* cmd) {
    cmd->add_option("--gamma1", g1, "strength of the reference well at x = 0");
    cmd->add_option("--gamma2", g2, "strength of the second well");
    cmd->add_option("--separation,-L", L, "distance between the wells");
    cmd->add_option("--hbar", hbar, "reduced Planck constant");
    cmd->add_option("--mass", mass, "particle mass");
  };
  CLI::App* exact = app.add_subcommand("exact", "exact energies of a delta-well pair");
  add_pair(exact);
  add_output_options(exact, exact_out);

  std::string method = "nondegenerate", parameter = "separation";
  double from = 2.0, to = 6.0;
  int steps = 5, order = 1;
  CLI::App* sweep = app.add_subcommand("sweep", "sweep separation or gamma2 for a delta-well pair");
  add_pair(sweep);
  sweep->add_option("--method,-m", method, "auto, nondegenerate, degenerate_pair, degenerate_multi, exact, "
                                            "oracle or naive");
  sweep->add_option("--parameter,-p", parameter, "separation or gamma2")
      ->check(CLI::IsMember({"separation", "gamma2"}));
  sweep->add_option("--from", from, "first value");
  sweep->add_option("--to", to, "last value");
  sweep->add_option("--steps", steps, "number of points");
  sweep->add_option("--order", order, "perturbative order (1 or 2)");
  add_output_options(sweep, sweep_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }
  run_out.output_set = run->count("--output") > 0;
  exact_out.output_set = exact->count("--output") > 0;
  sweep_out.output_set = sweep->count("--output") > 0;

  if (*run) {
    wellsep_experiment* exp = nullptr;
    const wellsep_status s = wellsep_experiment_from_file(config_path.c_str(), &exp);
    if (s != WELLSEP_OK) return fail(s == WELLSEP_ERR_IO ? kIo : kConfig, s);
    return execute(exp, run_out);
  }
  if (*exact) {
    nlohmann::json cfg = pair_json(g1, g2, L, hbar, mass);
    cfg["method"] = "exact";
    return from_json(cfg, exact_out);
  }
  nlohmann::json cfg = pair_json(g1, g2, L, hbar, mass);
  cfg["method"] = method;
  cfg["order"] = order;
  cfg["sweep"] = {{"parameter", parameter}, {"from", from}, {"to", to}, {"steps", steps}};
  return from_json(cfg, sweep_out);
}
