#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lwelab/rng.hpp"

namespace lwelab {

enum class ExperimentKind { gen, attack_classical, attack_quantum, bounds, gkp, sweep };
enum class OutputFormat { csv, json };

// One validated run request; field applicability depends on kind. The
// harness checks every field against the target module's preconditions
// before touching the filesystem or doing any work.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::gen;

  std::uint32_t n = 1;
  std::uint32_t q = 5;
  double sigma = 1.0;
  std::uint32_t m = 10;
  double radius = -1.0;  // <= 0 means q/4
  std::size_t trials = 100;
  double eta = 0.1;
  std::size_t max_samples = 64;
  std::size_t confirm = 50;
  double min_fraction = 0.9;
  std::vector<std::uint32_t> m_list = {1, 3, 5, 7, 9};  // gkp repetition counts
  std::size_t mc_draws = 1000000;                       // gkp Monte Carlo cross-check
  std::vector<std::uint32_t> n_list = {1, 2, 3};        // complexity sweep

  // sweep-only: the experiment to repeat, the single ranged parameter and
  // its values
  std::string sweep_kind;
  std::string sweep_param;
  std::vector<double> sweep_values;
  unsigned jobs = 1;

  std::uint64_t seed = 0;
  std::string out;
  OutputFormat format = OutputFormat::csv;
  std::string dump_state;  // attack-quantum: optional state dump path
};

struct RunManifest {
  std::string version;
  std::uint64_t seed;
  double duration_seconds;
  std::string config_json;   // echo of the validated config
  std::string summary_json;  // per-experiment result summary
  std::string out_path;

  std::string to_json() const;
};

// Validate, dispatch, write the result table and its manifest atomically.
RunManifest run(const ExperimentConfig& config);

// Execute one run per sweep value (seed + index each), aggregate one row
// per point into a single table. Points may run concurrently up to
// config.jobs; aggregation order is by point index regardless of
// completion order.
RunManifest sweep(const ExperimentConfig& config);

// 17-significant-digit decimal formatting shared by every CSV/JSON writer.
std::string format_real(double v);

// Write-to-temp-then-rename in the destination directory.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace lwelab
