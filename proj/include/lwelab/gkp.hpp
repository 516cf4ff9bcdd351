#pragma once

#include <cstdint>
#include <vector>

#include "lwelab/lwe.hpp"
#include "lwelab/ring.hpp"

namespace lwelab {

// Displacement decoder over the period-q lattice: shifts within the
// correctable radius are recentered onto the codeword, larger ones land on
// an adjacent lattice point (a logical error).
class LatticeCode {
 public:
  // Default radius q/4, half the spacing of the q/2 logical structure.
  explicit LatticeCode(Modulus q);
  LatticeCode(Modulus q, double correctable_radius);

  const Modulus& modulus() const { return q_; }
  double correctable_radius() const { return radius_; }

 private:
  Modulus q_;
  double radius_;
};

struct SyndromeRecord {
  std::int64_t residual;  // signed representative in (-q/2, q/2]
  bool within_radius;
  std::size_t sample_index;
};

struct DecodeResult {
  bool logical_error;
  SyndromeRecord syndrome;  // residual is reported either way
};

// Correct value toward codeword 0; success iff |signed rep| <= radius.
DecodeResult decode_displacement(const LatticeCode& code, std::uint32_t value);

// Exact tail mass of chi beyond the correctable radius.
double logical_error_probability(const LatticeCode& code, const DiscreteGaussian& chi);

// Probability that a majority of m i.i.d. chi-residuals decode wrongly
// (binomial tail, m odd). Models one concatenation layer of majority votes.
double concatenated_error_rate(const LatticeCode& code, const DiscreteGaussian& chi,
                               std::uint32_t m);

// Residuals b_i - <a_i, candidate> as displacement syndromes.
std::vector<SyndromeRecord> lwe_residual_syndromes(const InstanceSet& samples,
                                                   const SecretKey& candidate,
                                                   const LatticeCode& code);

enum class Confirmation { accept, reject };

// Accept iff at least min_fraction of the syndromes are within radius.
Confirmation key_confirmation(const InstanceSet& samples, const SecretKey& candidate,
                              const LatticeCode& code, double min_fraction = 0.9);

}  // namespace lwelab
