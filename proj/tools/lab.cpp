#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lwelab/errors.hpp"
#include "lwelab/harness.hpp"

namespace {

using lwelab::ExperimentConfig;
using lwelab::ExperimentKind;
using lwelab::OutputFormat;

void add_common(CLI::App* cmd, ExperimentConfig& config) {
  cmd->add_option("--n", config.n, "secret dimension");
  cmd->add_option("--q", config.q, "modulus");
  cmd->add_option("--sigma", config.sigma, "discrete Gaussian width");
  cmd->add_option("--seed", config.seed, "master seed");
  cmd->add_option("--out", config.out, "output path")->required();
}

unsigned default_jobs() {
  if (const char* env = std::getenv("LAB_JOBS")) {
    const long v = std::atol(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

void report_error(const std::string& type, const std::string& message) {
  nlohmann::json j;
  j["error"] = {{"type", type}, {"message", message}};
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lwelab: a desk-scale learning-with-errors laboratory"};
  app.require_subcommand(1);

  ExperimentConfig config;
  config.jobs = default_jobs();
  std::string format;
  std::vector<double> sweep_values;

  auto* gen = app.add_subcommand("gen", "generate a seeded LWE instance file");
  add_common(gen, config);
  gen->add_option("--m", config.m, "number of samples");

  auto* atk_c = app.add_subcommand("attack-classical",
                                   "maximum-likelihood exhaustive key recovery");
  add_common(atk_c, config);
  atk_c->add_option("--m", config.m, "samples per trial");
  atk_c->add_option("--trials", config.trials, "independent trials");

  auto* atk_q = app.add_subcommand("attack-quantum",
                                   "QFT-interference key recovery on quantum samples");
  add_common(atk_q, config);
  atk_q->add_option("--max-samples", config.max_samples, "quantum sample budget per trial");
  atk_q->add_option("--trials", config.trials, "independent trials");
  atk_q->add_option("--confirm", config.confirm, "classical confirmation samples");
  atk_q->add_option("--min-fraction", config.min_fraction,
                    "within-radius fraction required to confirm");
  atk_q->add_option("--radius", config.radius, "confirmation radius (default q/4)");
  atk_q->add_option("--dump-state", config.dump_state,
                    "debug CSV dump (index,re,im) of the first prepared state");

  auto* bounds = app.add_subcommand("bounds", "capacity, Fano and Fannes-Audenaert checks");
  add_common(bounds, config);
  bounds->add_option("--m", config.m, "samples in the conditional-entropy enumeration");

  auto* gkp = app.add_subcommand("gkp", "lattice displacement decoding error rates");
  add_common(gkp, config);
  gkp->add_option("--radius", config.radius, "correctable radius (default q/4)");
  gkp->add_option("--m-list", config.m_list, "odd repetition counts")->delimiter(',');
  gkp->add_option("--mc-draws", config.mc_draws, "Monte Carlo trials per point");

  auto* sweep = app.add_subcommand("sweep", "run one experiment over a ranged parameter");
  add_common(sweep, config);
  sweep->add_option("--kind", config.sweep_kind,
                    "attack-quantum|gkp|bounds|complexity")->required();
  sweep->add_option("--param", config.sweep_param, "ranged parameter name")->required();
  sweep->add_option("--values", sweep_values, "ranged values")->required()->delimiter(',');
  sweep->add_option("--m", config.m, "fixed m where applicable");
  sweep->add_option("--radius", config.radius, "fixed radius where applicable");
  sweep->add_option("--trials", config.trials, "trials per point");
  sweep->add_option("--eta", config.eta, "target failure rate (complexity)");
  sweep->add_option("--confirm", config.confirm, "confirmation samples (complexity)");
  sweep->add_option("--mc-draws", config.mc_draws, "Monte Carlo trials (gkp)");
  sweep->add_option("--jobs", config.jobs, "concurrent sweep points (env LAB_JOBS)");

  for (auto* cmd : {gen, atk_c, atk_q, bounds, gkp, sweep})
    cmd->add_option("--format", format, "csv|json (defaults to the natural format)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  if (gen->parsed()) config.kind = ExperimentKind::gen;
  if (atk_c->parsed()) config.kind = ExperimentKind::attack_classical;
  if (atk_q->parsed()) config.kind = ExperimentKind::attack_quantum;
  if (bounds->parsed()) config.kind = ExperimentKind::bounds;
  if (gkp->parsed()) config.kind = ExperimentKind::gkp;
  if (sweep->parsed()) {
    config.kind = ExperimentKind::sweep;
    config.sweep_values = sweep_values;
  }

  const bool json_kind =
      config.kind == ExperimentKind::gen || config.kind == ExperimentKind::bounds;
  config.format = json_kind ? OutputFormat::json : OutputFormat::csv;
  if (format == "csv") config.format = OutputFormat::csv;
  if (format == "json") config.format = OutputFormat::json;
  if (!format.empty() && format != "csv" && format != "json") {
    report_error("usage", "--format must be csv or json");
    return 2;
  }

  try {
    const lwelab::RunManifest manifest = lwelab::run(config);
    std::cout << manifest.to_json();
    return 0;
  } catch (const lwelab::UsageError& e) {
    report_error("usage", e.what());
    return 2;
  } catch (const lwelab::UnsupportedModulus& e) {
    report_error("unsupported_modulus", e.what());
    return 2;
  } catch (const lwelab::CapacityExceeded& e) {
    report_error("capacity", e.what());
    return 3;
  } catch (const lwelab::NumericalFailure& e) {
    report_error("numerical", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    report_error("usage", e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return 1;
  }
}
