#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lwelab/ring.hpp"
#include "lwelab/rng.hpp"

namespace lwelab {

struct SecretKey {
  ZqVector s;

  friend bool operator==(const SecretKey& l, const SecretKey& r) { return l.s == r.s; }
};

// One pair (a, b). The generating error is retained for locally generated
// samples so tests can assert exactness; it is excluded from the public
// serialization.
struct LweSample {
  ZqVector a;
  std::uint32_t b;
  std::optional<std::uint32_t> ground_truth_error;
};

enum class Provenance { lwe, uniform };

struct LweParams {
  std::uint32_t n;
  Modulus q;
  double sigma;
};

class InstanceSet {
 public:
  InstanceSet(std::vector<LweSample> samples, LweParams params, Provenance provenance,
              RandomSeed seed);

  const std::vector<LweSample>& samples() const { return samples_; }
  const LweParams& params() const { return params_; }
  Provenance provenance() const { return provenance_; }
  RandomSeed seed() const { return seed_; }
  std::size_t size() const { return samples_.size(); }

  // Public view: {"n","q","sigma","provenance","samples":[{"a":[...],"b":...}]}
  std::string to_json() const;
  static InstanceSet from_json(const std::string& text);
  // Ground-truth errors (and optionally the generating key), kept out of
  // the public view.
  std::string secret_sidecar_json(const SecretKey* key = nullptr) const;

 private:
  std::vector<LweSample> samples_;
  LweParams params_;
  Provenance provenance_;
  RandomSeed seed_;
};

// Uniform secret over Z_q^n, deterministic given seed.
SecretKey gen_secret(std::uint32_t n, Modulus q, RandomSeed seed);

// m samples with a uniform, e ~ chi and b = <a,s> + e mod q.
InstanceSet sample_lwe(const SecretKey& key, const DiscreteGaussian& chi, std::size_t m,
                       RandomSeed seed);

// m pairs uniform over Z_q^n x Z_q.
InstanceSet sample_uniform(std::uint32_t n, Modulus q, std::size_t m, RandomSeed seed);

enum class SolveStatus { ok, insufficient_rank, verify_fail };

struct SolveResult {
  SolveStatus status;
  std::optional<SecretKey> key;
};

// Gaussian elimination over the field Z_q (prime q only; composite throws
// UnsupportedModulus). Recovered key must reproduce every b exactly, else
// verify_fail.
SolveResult solve_noiseless(const InstanceSet& samples);

// Exhaustive maximum-likelihood search over all q^n candidates, ties broken
// lexicographically. Guarded by q^n <= 10^7.
SecretKey brute_force_search(const InstanceSet& samples, const DiscreteGaussian& chi);

// Exact total-variation distance between one LWE sample's distribution and
// uniform; reduces to TV(chi, uniform).
double decision_statistical_distance(const DiscreteGaussian& chi);

}  // namespace lwelab
