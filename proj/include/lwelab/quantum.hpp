#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lwelab/gkp.hpp"
#include "lwelab/lwe.hpp"
#include "lwelab/ring.hpp"
#include "lwelab/rng.hpp"

namespace lwelab {

enum class Register { input, output };

// Dense statevector over Z_q^n x Z_q, indexed row-major with the input
// register varying slowest: index = (a_1 q^{n-1} + ... + a_n) * q + b.
// Owned by one simulation at a time; operations mutate in place.
class StateVector {
 public:
  static constexpr std::uint64_t kMaxAmplitudes = 1ull << 24;

  // |0...0>|0>
  StateVector(std::uint32_t n, Modulus q);
  static StateVector basis(std::uint32_t n, Modulus q, std::span<const std::uint32_t> a,
                           std::uint32_t b);
  static StateVector from_amplitudes(std::uint32_t n, Modulus q,
                                     std::vector<std::complex<double>> amplitudes);

  std::uint32_t n() const { return n_; }
  const Modulus& modulus() const { return q_; }
  std::uint64_t dim() const { return amp_.size(); }
  std::uint64_t input_dim() const { return amp_.size() / q_.value(); }

  std::complex<double>& at(std::uint64_t a_flat, std::uint32_t b) {
    return amp_[a_flat * q_.value() + b];
  }
  const std::complex<double>& at(std::uint64_t a_flat, std::uint32_t b) const {
    return amp_[a_flat * q_.value() + b];
  }
  std::span<const std::complex<double>> amplitudes() const { return amp_; }

  double norm_squared() const;

  std::vector<std::uint32_t> digits(std::uint64_t a_flat) const;
  std::uint64_t flat(std::span<const std::uint32_t> a) const;

 private:
  std::vector<std::complex<double>> amp_;
  std::uint32_t n_;
  Modulus q_;

  friend void qft(StateVector&, Register);
  friend void inverse_qft(StateVector&, Register);
};

// Fresh error table e_a, one residue per input basis index.
struct ErrorRealization {
  std::vector<std::uint32_t> e;
};

// The quantum sample: amplitude q^{-n/2} at (a, <a,s> + e_a) for every a.
std::pair<StateVector, ErrorRealization> prepare_lwe_state(const SecretKey& key,
                                                           const DiscreteGaussian& chi,
                                                           RandomSeed seed);

// F_q[x,y] = omega^{x y} / sqrt(q) applied to each coordinate of the chosen
// register (all n input coordinates, or the single output register).
void qft(StateVector& state, Register reg);
void inverse_qft(StateVector& state, Register reg);

// Projective measurement of the whole register with Born probabilities;
// collapses and renormalizes in place. Returns one digit per coordinate.
std::vector<std::uint32_t> measure_register(StateVector& state, Register reg,
                                            RandomSeed seed);

// Forced projection onto a register outcome; returns the outcome's Born
// probability and collapses in place (used for exact, sampling-free checks).
// Zero-probability outcomes cannot be collapsed onto and are an error.
double project_register(StateVector& state, Register reg,
                        std::span<const std::uint32_t> outcome);

// The outcome's Born probability without touching the state.
double outcome_probability(const StateVector& state, Register reg,
                           std::span<const std::uint32_t> outcome);

struct ExtractResult {
  std::uint32_t y;
  std::optional<SecretKey> candidate;  // empty on the uninformative y = 0 branch
};

// One round of the QFT-interference recovery: QFT the output register,
// measure y, inverse-QFT the input register, measure z, report y^{-1} z.
// Requires odd prime q so every y != 0 is invertible.
ExtractResult gkz_extract_candidate(StateVector& state, RandomSeed seed);

// Expected probability, over fresh error realizations, that the input
// measurement yields z = y*s after observing y != 0:
// |chi_hat(y)|^2 + (1 - |chi_hat(y)|^2) / q^n.
double predicted_success_probability(const DiscreteGaussian& chi, std::uint32_t n,
                                     std::uint32_t y);

struct TrialRecord {
  std::uint32_t measured_y;
  std::optional<SecretKey> candidate;
  bool confirmed;
  RandomSeed confirm_seed;  // empty candidate => unused
};

struct AttackReport {
  std::optional<SecretKey> recovered;
  std::size_t samples_consumed = 0;
  std::vector<TrialRecord> per_trial_log;
};

struct AttackOptions {
  double min_fraction = 0.9;
  // correctable radius for confirmation; <= 0 means the q/4 default
  double radius = -1.0;
};

// Repeat extract-and-confirm on fresh quantum samples until a candidate
// passes key_confirmation against confirm_threshold fresh classical samples
// or the budget runs out. Every drawn sample (including y = 0 branches)
// counts as consumed.
AttackReport gkz_attack(const SecretKey& key, const DiscreteGaussian& chi,
                        std::size_t max_samples, std::size_t confirm_threshold,
                        RandomSeed seed, const AttackOptions& options = {});

struct ComplexityRow {
  std::uint32_t n;
  std::size_t budget;        // smallest budget with empirical success >= 1 - eta
  double success_rate;       // success rate at that budget
};

// For each n, binary-search the smallest per-attack sample budget whose
// empirical success rate over `trials` seeded attacks reaches 1 - eta.
std::vector<ComplexityRow> sample_complexity_sweep(std::span<const std::uint32_t> n_values,
                                                   Modulus q, double sigma, double eta,
                                                   std::size_t trials,
                                                   std::size_t confirm_threshold,
                                                   RandomSeed seed,
                                                   const AttackOptions& options = {});

}  // namespace lwelab
