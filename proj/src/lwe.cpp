#include "lwelab/lwe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "lwelab/errors.hpp"

namespace lwelab {

namespace {

ZqVector random_vector(std::uint32_t n, Modulus q, Rng& rng) {
  std::vector<std::uint32_t> entries(n);
  for (auto& e : entries) e = rng.below(q.value());
  return ZqVector(std::move(entries), q);
}

// Next candidate in ascending lexicographic order; false after the last.
bool odometer_next(std::vector<std::uint32_t>& digits, std::uint32_t q) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < q) return true;
    digits[i] = 0;
  }
  return false;
}

}  // namespace

InstanceSet::InstanceSet(std::vector<LweSample> samples, LweParams params,
                         Provenance provenance, RandomSeed seed)
    : samples_(std::move(samples)), params_(params), provenance_(provenance), seed_(seed) {
  for (const auto& s : samples_) {
    if (!(s.a.modulus() == params_.q) || s.a.dimension() != params_.n)
      throw std::invalid_argument("InstanceSet: sample does not match params");
    if (s.b >= params_.q.value())
      throw std::invalid_argument("InstanceSet: b outside canonical range");
  }
}

SecretKey gen_secret(std::uint32_t n, Modulus q, RandomSeed seed) {
  if (n < 1) throw std::invalid_argument("gen_secret: n must be >= 1");
  Rng rng(seed);
  return SecretKey{random_vector(n, q, rng)};
}

InstanceSet sample_lwe(const SecretKey& key, const DiscreteGaussian& chi, std::size_t m,
                       RandomSeed seed) {
  if (m < 1) throw std::invalid_argument("sample_lwe: m must be >= 1");
  if (!(chi.modulus() == key.s.modulus()))
    throw std::invalid_argument("sample_lwe: chi modulus does not match key modulus");
  const Modulus q = key.s.modulus();
  const std::uint32_t n = key.s.dimension();

  Rng rng(derive_seed(seed, 0));
  const auto errors = sample_error(chi, derive_seed(seed, 1), m);

  std::vector<LweSample> samples;
  samples.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    ZqVector a = random_vector(n, q, rng);
    const std::uint32_t b = q.add(inner_product(a, key.s), errors[i]);
    samples.push_back(LweSample{std::move(a), b, errors[i]});
  }
  return InstanceSet(std::move(samples), LweParams{n, q, chi.sigma()}, Provenance::lwe,
                     seed);
}

InstanceSet sample_uniform(std::uint32_t n, Modulus q, std::size_t m, RandomSeed seed) {
  if (n < 1) throw std::invalid_argument("sample_uniform: n must be >= 1");
  if (m < 1) throw std::invalid_argument("sample_uniform: m must be >= 1");
  Rng rng(derive_seed(seed, 0));
  std::vector<LweSample> samples;
  samples.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    ZqVector a = random_vector(n, q, rng);
    const std::uint32_t b = rng.below(q.value());
    samples.push_back(LweSample{std::move(a), b, std::nullopt});
  }
  return InstanceSet(std::move(samples), LweParams{n, q, 0.0}, Provenance::uniform, seed);
}

SolveResult solve_noiseless(const InstanceSet& samples) {
  const Modulus q = samples.params().q;
  if (!q.is_prime()) throw UnsupportedModulus("solve_noiseless: composite modulus");
  const std::uint32_t n = samples.params().n;
  const std::size_t m = samples.size();

  // augmented rows [a | b] over the field Z_q
  std::vector<std::vector<std::uint32_t>> rows(m, std::vector<std::uint32_t>(n + 1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) rows[i][j] = samples.samples()[i].a[j];
    rows[i][n] = samples.samples()[i].b;
  }

  std::size_t pivot_row = 0;
  for (std::uint32_t col = 0; col < n && pivot_row < m; ++col) {
    std::size_t sel = pivot_row;
    while (sel < m && rows[sel][col] == 0) ++sel;
    if (sel == m) continue;  // no pivot in this column
    std::swap(rows[sel], rows[pivot_row]);
    const std::uint32_t inv = q.inverse(rows[pivot_row][col]);
    for (std::uint32_t j = col; j <= n; ++j)
      rows[pivot_row][j] = q.mul(rows[pivot_row][j], inv);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == pivot_row || rows[i][col] == 0) continue;
      const std::uint32_t f = rows[i][col];
      for (std::uint32_t j = col; j <= n; ++j)
        rows[i][j] = q.sub(rows[i][j], q.mul(f, rows[pivot_row][j]));
    }
    ++pivot_row;
  }
  if (pivot_row < n) return SolveResult{SolveStatus::insufficient_rank, std::nullopt};

  // reduced echelon with n pivots: read the solution off the pivot rows
  std::vector<std::uint32_t> s(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t col = 0;
    while (col < n && rows[i][col] == 0) ++col;
    if (col < n) s[col] = rows[i][n];
  }
  SecretKey key{ZqVector(std::move(s), q)};
  for (const auto& sample : samples.samples()) {
    if (inner_product(sample.a, key.s) != sample.b)
      return SolveResult{SolveStatus::verify_fail, std::nullopt};
  }
  return SolveResult{SolveStatus::ok, std::move(key)};
}

SecretKey brute_force_search(const InstanceSet& samples, const DiscreteGaussian& chi) {
  const Modulus q = samples.params().q;
  if (!(chi.modulus() == q))
    throw std::invalid_argument("brute_force_search: chi modulus mismatch");
  const std::uint32_t n = samples.params().n;
  double space = std::pow(double(q.value()), double(n));
  if (space > 1e7) throw CapacityExceeded("brute_force_search: q^n above 10^7");

  std::vector<std::uint32_t> candidate(n, 0);
  std::vector<std::uint32_t> best = candidate;
  double best_score = -std::numeric_limits<double>::infinity();
  bool first = true;
  do {
    ZqVector cand(candidate, q);
    double score = 0.0;
    for (const auto& sample : samples.samples()) {
      const double p = chi.pmf_at(q.sub(sample.b, inner_product(sample.a, cand)));
      score += p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
      if (std::isinf(score)) break;
    }
    // strict improvement keeps the lexicographically first maximizer
    if (first || score > best_score) {
      best_score = score;
      best = candidate;
      first = false;
    }
  } while (odometer_next(candidate, q.value()));
  return SecretKey{ZqVector(std::move(best), q)};
}

double decision_statistical_distance(const DiscreteGaussian& chi) {
  const std::uint32_t q = chi.modulus().value();
  double tv = 0.0;
  for (std::uint32_t x = 0; x < q; ++x) tv += std::abs(chi.pmf_at(x) - 1.0 / q);
  return 0.5 * tv;
}

std::string InstanceSet::to_json() const {
  nlohmann::json j;
  j["n"] = params_.n;
  j["q"] = params_.q.value();
  j["sigma"] = params_.sigma;
  j["provenance"] = provenance_ == Provenance::lwe ? "lwe" : "uniform";
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : samples_) {
    arr.push_back({{"a", s.a.entries()}, {"b", s.b}});
  }
  j["samples"] = std::move(arr);
  return j.dump(2) + "\n";
}

InstanceSet InstanceSet::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Modulus q(j.at("q").get<std::uint32_t>());
  const auto n = j.at("n").get<std::uint32_t>();
  LweParams params{n, q, j.at("sigma").get<double>()};
  const Provenance prov =
      j.at("provenance").get<std::string>() == "lwe" ? Provenance::lwe : Provenance::uniform;
  std::vector<LweSample> samples;
  for (const auto& item : j.at("samples")) {
    samples.push_back(LweSample{
        ZqVector(item.at("a").get<std::vector<std::uint32_t>>(), q),
        item.at("b").get<std::uint32_t>(), std::nullopt});
  }
  return InstanceSet(std::move(samples), params, prov, RandomSeed{0});
}

std::string InstanceSet::secret_sidecar_json(const SecretKey* key) const {
  nlohmann::json j;
  nlohmann::json errors = nlohmann::json::array();
  for (const auto& s : samples_) {
    if (s.ground_truth_error) errors.push_back(*s.ground_truth_error);
  }
  j["e"] = std::move(errors);
  if (key != nullptr) j["s"] = key->s.entries();
  return j.dump(2) + "\n";
}

}  // namespace lwelab
