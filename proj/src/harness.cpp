#include "lwelab/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "lwelab/errors.hpp"
#include "lwelab/gkp.hpp"
#include "lwelab/info_bounds.hpp"
#include "lwelab/lwe.hpp"
#include "lwelab/quantum.hpp"
#include "lwelab/ring.hpp"

namespace lwelab {

namespace {

using nlohmann::json;

const char* kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::gen: return "gen";
    case ExperimentKind::attack_classical: return "attack-classical";
    case ExperimentKind::attack_quantum: return "attack-quantum";
    case ExperimentKind::bounds: return "bounds";
    case ExperimentKind::gkp: return "gkp";
    case ExperimentKind::sweep: return "sweep";
  }
  return "?";
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["kind"] = kind_name(c.kind);
  j["n"] = c.n;
  j["q"] = c.q;
  j["sigma"] = c.sigma;
  j["m"] = c.m;
  j["radius"] = c.radius;
  j["trials"] = c.trials;
  j["eta"] = c.eta;
  j["max_samples"] = c.max_samples;
  j["confirm"] = c.confirm;
  j["min_fraction"] = c.min_fraction;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["format"] = c.format == OutputFormat::csv ? "csv" : "json";
  if (c.kind == ExperimentKind::gkp) {
    j["m_list"] = c.m_list;
    j["mc_draws"] = c.mc_draws;
  }
  if (c.kind == ExperimentKind::sweep) {
    j["sweep_kind"] = c.sweep_kind;
    j["sweep_param"] = c.sweep_param;
    j["sweep_values"] = c.sweep_values;
    j["jobs"] = c.jobs;
  }
  return j;
}

double checked_pow(double base, double exponent) { return std::pow(base, exponent); }

// Field-level validation against the target module's preconditions, before
// any work or filesystem writes happen.
void validate(const ExperimentConfig& c) {
  if (c.out.empty()) throw UsageError("--out is required");
  if (c.q < 2) throw UsageError("--q must be >= 2");
  if (c.q > Modulus::kMax) throw UsageError("--q above desk-scale limit 2^20");
  if (c.n < 1) throw UsageError("--n must be >= 1");

  const Modulus q(c.q);
  switch (c.kind) {
    case ExperimentKind::gen:
      if (!(c.sigma > 0.0)) throw UsageError("--sigma must be positive");
      if (c.m < 1) throw UsageError("--m must be >= 1");
      if (c.format == OutputFormat::csv)
        throw UsageError("gen emits JSON; use a .json output");
      break;
    case ExperimentKind::attack_classical:
      if (!(c.sigma > 0.0)) throw UsageError("--sigma must be positive");
      if (c.m < 1) throw UsageError("--m must be >= 1");
      if (c.trials < 1) throw UsageError("--trials must be >= 1");
      if (checked_pow(double(c.q), double(c.n)) > 1e7)
        throw CapacityExceeded("attack-classical: q^n above 10^7");
      if (c.format == OutputFormat::json) throw UsageError("attack-classical emits CSV");
      break;
    case ExperimentKind::attack_quantum:
      if (!(c.sigma > 0.0)) throw UsageError("--sigma must be positive");
      if (c.trials < 1) throw UsageError("--trials must be >= 1");
      if (c.confirm < 1) throw UsageError("--confirm must be >= 1");
      if (!q.is_odd_prime())
        throw UnsupportedModulus("attack-quantum: q must be an odd prime");
      if (checked_pow(double(c.q), double(c.n) + 1.0) > double(StateVector::kMaxAmplitudes))
        throw CapacityExceeded("attack-quantum: q^(n+1) exceeds 2^24");
      if (c.format == OutputFormat::json) throw UsageError("attack-quantum emits CSV");
      break;
    case ExperimentKind::bounds:
      if (!(c.sigma > 0.0)) throw UsageError("--sigma must be positive");
      if (c.format == OutputFormat::csv) throw UsageError("bounds emits JSON");
      break;
    case ExperimentKind::gkp:
      if (!(c.sigma > 0.0)) throw UsageError("--sigma must be positive");
      if (c.m_list.empty()) throw UsageError("--m-list must be nonempty");
      for (auto m : c.m_list) {
        if (m < 1 || m % 2 == 0) throw UsageError("--m-list entries must be odd");
      }
      if (c.mc_draws < 1) throw UsageError("--mc-draws must be >= 1");
      if (c.format == OutputFormat::json) throw UsageError("gkp emits CSV");
      break;
    case ExperimentKind::sweep:
      if (c.sweep_param.empty() || c.sweep_values.empty())
        throw UsageError("sweep requires exactly one ranged parameter (--param, --values)");
      if (c.sweep_kind != "attack-quantum" && c.sweep_kind != "gkp" &&
          c.sweep_kind != "bounds" && c.sweep_kind != "complexity")
        throw UsageError("sweep kind must be attack-quantum|gkp|bounds|complexity");
      if (c.format == OutputFormat::json) throw UsageError("sweep emits CSV");
      break;
  }
  if (c.radius > 0.0 && c.radius > c.q / 2.0)
    throw UsageError("--radius must lie in (0, q/2]");
}

LatticeCode code_for(const ExperimentConfig& c, Modulus q) {
  return c.radius > 0.0 ? LatticeCode(q, c.radius) : LatticeCode(q);
}

struct KindResult {
  std::string table;        // file payload (CSV text or JSON text)
  json summary;
  std::string sidecar;      // optional extra payload (gen secret file)
  std::string sidecar_path;
};

std::string sidecar_path_for(const std::string& out) {
  std::filesystem::path p(out);
  std::filesystem::path side = p.parent_path();
  side /= p.stem().string() + "_secret" + p.extension().string();
  return side.string();
}

KindResult run_gen(const ExperimentConfig& c) {
  const Modulus q(c.q);
  const auto chi = make_gaussian(c.sigma, q);
  const SecretKey key = gen_secret(c.n, q, derive_seed({c.seed}, 0));
  const InstanceSet set = sample_lwe(key, chi, c.m, derive_seed({c.seed}, 1));
  KindResult result;
  result.table = set.to_json();
  result.sidecar = set.secret_sidecar_json(&key);
  result.sidecar_path = sidecar_path_for(c.out);
  result.summary = {{"m", c.m}, {"provenance", "lwe"}};
  return result;
}

KindResult run_attack_classical(const ExperimentConfig& c) {
  const Modulus q(c.q);
  const auto chi = make_gaussian(c.sigma, q);
  std::ostringstream csv;
  csv << "trial,success\n";
  std::size_t successes = 0;
  for (std::size_t t = 0; t < c.trials; ++t) {
    const SecretKey key = gen_secret(c.n, q, derive_seed({c.seed}, 2 * t));
    const InstanceSet set = sample_lwe(key, chi, c.m, derive_seed({c.seed}, 2 * t + 1));
    const SecretKey recovered = brute_force_search(set, chi);
    const bool ok = recovered == key;
    successes += ok ? 1 : 0;
    csv << t << "," << (ok ? 1 : 0) << "\n";
  }
  KindResult result;
  result.table = csv.str();
  result.summary = {{"trials", c.trials},
                    {"successes", successes},
                    {"success_rate", double(successes) / double(c.trials)}};
  return result;
}

std::string dump_state_csv(const StateVector& state) {
  std::ostringstream csv;
  csv << "index,re,im\n";
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    csv << i << "," << format_real(amps[i].real()) << "," << format_real(amps[i].imag())
        << "\n";
  }
  return csv.str();
}

KindResult run_attack_quantum(const ExperimentConfig& c) {
  const Modulus q(c.q);
  const auto chi = make_gaussian(c.sigma, q);
  const AttackOptions options{c.min_fraction, c.radius};

  std::ostringstream csv;
  csv << "trial,samples_consumed,success,measured_y_sequence\n";
  std::size_t successes = 0;
  double consumed_on_success = 0.0;

  for (std::size_t t = 0; t < c.trials; ++t) {
    const SecretKey key = gen_secret(c.n, q, derive_seed({c.seed}, 2 * t));
    const RandomSeed attack_seed = derive_seed({c.seed}, 2 * t + 1);
    if (t == 0 && !c.dump_state.empty()) {
      auto [state, realization] =
          prepare_lwe_state(key, chi, derive_seed(attack_seed, 0));
      write_atomic(c.dump_state, dump_state_csv(state));
    }
    const AttackReport report =
        gkz_attack(key, chi, c.max_samples, c.confirm, attack_seed, options);
    const bool ok = report.recovered && *report.recovered == key;
    if (ok) {
      ++successes;
      consumed_on_success += double(report.samples_consumed);
    }
    std::string ys;
    for (const auto& rec : report.per_trial_log) {
      if (!ys.empty()) ys += ';';
      ys += std::to_string(rec.measured_y);
    }
    csv << t << "," << report.samples_consumed << "," << (ok ? 1 : 0) << "," << ys << "\n";
  }
  KindResult result;
  result.table = csv.str();
  result.summary = {{"trials", c.trials},
                    {"successes", successes},
                    {"success_rate", double(successes) / double(c.trials)},
                    {"mean_samples_on_success",
                     successes ? consumed_on_success / double(successes) : 0.0}};
  return result;
}

KindResult run_bounds(const ExperimentConfig& c) {
  const Modulus q(c.q);
  const auto chi = make_gaussian(c.sigma, q);
  const CapacityResult capacity = additive_channel_capacity(chi);
  const double chi_entropy = shannon_entropy(chi.pmf(), LogBase::two);

  json reports = json::array();
  json j;
  j["n"] = c.n;
  j["q"] = c.q;
  j["sigma"] = c.sigma;
  j["m"] = c.m;
  j["capacity_bits"] = capacity.closed_form_bits;
  j["capacity_bits_iterative"] = capacity.iterative_bits;
  j["chi_entropy_bits"] = chi_entropy;
  j["tv_distance_uniform"] = decision_statistical_distance(chi);

  const ConditionalEntropy cond = exact_conditional_entropy(c.n, q, chi, c.m);
  j["conditional_entropy_bits"] = cond.h_bits;
  j["map_error"] = cond.map_error;
  const double secrets = checked_pow(double(c.q), double(c.n));
  const double fano = fano_bound(cond.map_error, std::uint64_t(std::llround(secrets)));
  reports.push_back({{"quantity_name", "fano_conditional_entropy"},
                     {"computed_value", cond.h_bits},
                     {"bound_value", fano},
                     {"satisfied", cond.h_bits <= fano + 1e-9},
                     {"slack", fano - cond.h_bits}});

  if (checked_pow(double(c.q), double(c.n) + 1.0) <= 4096.0) {
    const LweStatePair pair = lwe_state_pair(c.n, q, chi);
    const BoundReport fa = fannes_audenaert_check(pair.ideal, pair.noisy);
    j["trace_distance"] = trace_distance(pair.ideal, pair.noisy);
    j["state_pair_mode"] = pair.mode;
    reports.push_back({{"quantity_name", fa.quantity_name},
                       {"computed_value", fa.computed_value},
                       {"bound_value", fa.bound_value},
                       {"satisfied", fa.satisfied},
                       {"slack", fa.slack}});
  }
  j["reports"] = std::move(reports);

  KindResult result;
  result.table = j.dump(2) + "\n";
  result.summary = {{"capacity_bits", capacity.closed_form_bits},
                    {"map_error", cond.map_error}};
  return result;
}

struct GkpRow {
  std::uint32_t m;
  double exact_rate;
  double mc_rate;
  double stderr_value;
};

GkpRow gkp_row(const LatticeCode& code, const DiscreteGaussian& chi, std::uint32_t m,
               std::size_t draws, RandomSeed seed) {
  const double exact = concatenated_error_rate(code, chi, m);
  const auto residuals = sample_error(chi, seed, draws * m);
  std::size_t majority_bad = 0;
  for (std::size_t t = 0; t < draws; ++t) {
    std::uint32_t bad = 0;
    for (std::uint32_t i = 0; i < m; ++i) {
      const auto r = code.modulus().signed_representative(residuals[t * m + i]);
      if (std::abs(double(r)) > code.correctable_radius()) ++bad;
    }
    if (2 * bad > m) ++majority_bad;
  }
  const double rate = double(majority_bad) / double(draws);
  return GkpRow{m, exact, rate, std::sqrt(rate * (1.0 - rate) / double(draws))};
}

KindResult run_gkp(const ExperimentConfig& c) {
  const Modulus q(c.q);
  const auto chi = make_gaussian(c.sigma, q);
  const LatticeCode code = code_for(c, q);
  std::ostringstream csv;
  csv << "m,exact_rate,monte_carlo_rate,stderr\n";
  for (std::size_t i = 0; i < c.m_list.size(); ++i) {
    const GkpRow row =
        gkp_row(code, chi, c.m_list[i], c.mc_draws, derive_seed({c.seed}, i));
    csv << row.m << "," << format_real(row.exact_rate) << "," << format_real(row.mc_rate)
        << "," << format_real(row.stderr_value) << "\n";
  }
  KindResult result;
  result.table = csv.str();
  result.summary = {{"points", c.m_list.size()}};
  return result;
}

// ---- sweep ----------------------------------------------------------------

ExperimentConfig point_config(const ExperimentConfig& base, double value,
                              std::size_t index) {
  ExperimentConfig point = base;
  point.seed = base.seed + index;  // per-point independence with reproducibility
  const auto& param = base.sweep_param;
  if (param == "sigma") {
    point.sigma = value;
  } else if (param == "n") {
    point.n = static_cast<std::uint32_t>(std::llround(value));
  } else if (param == "q") {
    point.q = static_cast<std::uint32_t>(std::llround(value));
  } else if (param == "m") {
    point.m = static_cast<std::uint32_t>(std::llround(value));
    point.m_list = {point.m};
  } else if (param == "radius") {
    point.radius = value;
  } else if (param == "eta") {
    point.eta = value;
  } else {
    throw UsageError("unknown sweep parameter: " + param);
  }
  return point;
}

std::string sweep_point_row(const ExperimentConfig& point, double value) {
  const Modulus q(point.q);
  const auto chi = make_gaussian(point.sigma, q);
  std::ostringstream row;
  if (point.sweep_kind == "attack-quantum") {
    // one extraction per trial: empirical success among informative (y != 0)
    // branches next to the analytic prediction
    if (!q.is_odd_prime())
      throw UnsupportedModulus("sweep attack-quantum: q must be an odd prime");
    std::size_t informative = 0, hits = 0;
    for (std::size_t t = 0; t < point.trials; ++t) {
      const RandomSeed trial_seed = derive_seed({point.seed}, t);
      const SecretKey key = gen_secret(point.n, q, derive_seed(trial_seed, 0));
      auto [state, realization] = prepare_lwe_state(key, chi, derive_seed(trial_seed, 1));
      const auto extracted = gkz_extract_candidate(state, derive_seed(trial_seed, 2));
      if (extracted.y == 0) continue;
      ++informative;
      hits += (extracted.candidate && *extracted.candidate == key) ? 1 : 0;
    }
    double analytic = 0.0;
    for (std::uint32_t y = 1; y < point.q; ++y)
      analytic += predicted_success_probability(chi, point.n, y);
    analytic /= double(point.q - 1);
    row << format_real(value) << "," << informative << ","
        << format_real(informative ? double(hits) / double(informative) : 0.0) << ","
        << format_real(analytic);
  } else if (point.sweep_kind == "gkp") {
    const LatticeCode code = code_for(point, q);
    const GkpRow g =
        gkp_row(code, chi, point.m_list.at(0), point.mc_draws, derive_seed({point.seed}, 0));
    row << format_real(value) << "," << format_real(g.exact_rate) << ","
        << format_real(g.mc_rate) << "," << format_real(g.stderr_value);
  } else if (point.sweep_kind == "bounds") {
    const CapacityResult capacity = additive_channel_capacity(chi);
    row << format_real(value) << "," << format_real(capacity.closed_form_bits) << ","
        << format_real(capacity.iterative_bits) << ","
        << format_real(shannon_entropy(chi.pmf(), LogBase::two));
  } else if (point.sweep_kind == "complexity") {
    const std::uint32_t n_point[] = {point.n};
    const AttackOptions options{point.min_fraction, point.radius};
    const auto table = sample_complexity_sweep(n_point, q, point.sigma, point.eta,
                                               point.trials, point.confirm,
                                               {point.seed}, options);
    row << format_real(value) << "," << table.at(0).budget << ","
        << format_real(table.at(0).success_rate);
  } else {
    throw UsageError("unknown sweep kind: " + point.sweep_kind);
  }
  return row.str();
}

const char* sweep_header(const std::string& kind) {
  if (kind == "attack-quantum") return "value,informative_trials,success_rate,predicted\n";
  if (kind == "gkp") return "value,exact_rate,monte_carlo_rate,stderr\n";
  if (kind == "bounds") return "value,capacity_bits,capacity_bits_iterative,chi_entropy_bits\n";
  return "value,budget,success_rate\n";
}

RunManifest finalize(const ExperimentConfig& c, KindResult result,
                     std::chrono::steady_clock::time_point started) {
  write_atomic(c.out, result.table);
  if (!result.sidecar.empty()) write_atomic(result.sidecar_path, result.sidecar);

  RunManifest manifest;
  manifest.version = LWELAB_VERSION;
  manifest.seed = c.seed;
  manifest.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  manifest.config_json = config_to_json(c).dump();
  manifest.summary_json = result.summary.dump();
  manifest.out_path = c.out;
  write_atomic(c.out + ".manifest.json", manifest.to_json());
  return manifest;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  if (target.has_parent_path())
    std::filesystem::create_directories(target.parent_path());
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_atomic: cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write_atomic: short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::string RunManifest::to_json() const {
  json j;
  j["version"] = version;
  j["seed"] = seed;
  j["duration_seconds"] = duration_seconds;
  j["config"] = json::parse(config_json);
  j["summary"] = json::parse(summary_json);
  j["output"] = out_path;
  return j.dump(2) + "\n";
}

RunManifest run(const ExperimentConfig& config) {
  validate(config);
  const auto started = std::chrono::steady_clock::now();
  switch (config.kind) {
    case ExperimentKind::gen: return finalize(config, run_gen(config), started);
    case ExperimentKind::attack_classical:
      return finalize(config, run_attack_classical(config), started);
    case ExperimentKind::attack_quantum:
      return finalize(config, run_attack_quantum(config), started);
    case ExperimentKind::bounds: return finalize(config, run_bounds(config), started);
    case ExperimentKind::gkp: return finalize(config, run_gkp(config), started);
    case ExperimentKind::sweep: return sweep(config);
  }
  throw UsageError("unknown experiment kind");
}

RunManifest sweep(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.kind = ExperimentKind::sweep;
  validate(c);
  const auto started = std::chrono::steady_clock::now();

  const std::size_t points = c.sweep_values.size();
  std::vector<std::string> rows(points);
  std::vector<std::exception_ptr> failures(points);

  unsigned jobs = std::max(1u, c.jobs);
  jobs = std::min<unsigned>(jobs, points);
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= points) return;
      try {
        rows[i] = sweep_point_row(point_config(c, c.sweep_values[i], i), c.sweep_values[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  std::string csv = sweep_header(c.sweep_kind);
  for (const auto& row : rows) csv += row + "\n";

  KindResult result;
  result.table = std::move(csv);
  result.summary = {{"points", points}, {"kind", c.sweep_kind}, {"param", c.sweep_param}};
  return finalize(c, std::move(result), started);
}

}  // namespace lwelab
