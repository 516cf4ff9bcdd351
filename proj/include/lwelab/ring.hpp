#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lwelab/rng.hpp"

namespace lwelab {

// Integer modulus q >= 2, desk-scale (q <= 2^20). Primality is settled by
// trial division at construction.
class Modulus {
 public:
  static constexpr std::uint32_t kMax = 1u << 20;

  explicit Modulus(std::uint32_t q);

  std::uint32_t value() const { return q_; }
  bool is_odd_prime() const { return is_odd_prime_; }
  bool is_prime() const { return is_prime_; }

  // Canonical residue range is [0, q); signed representatives live in
  // (-q/2, q/2] and are used only for magnitude/decoding logic.
  std::int64_t signed_representative(std::uint32_t x) const;

  std::uint32_t reduce(std::int64_t v) const;
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return (a + b) % q_; }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return (a + q_ - b) % q_; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>((std::uint64_t(a) * b) % q_);
  }
  // Multiplicative inverse; requires prime q and a != 0.
  std::uint32_t inverse(std::uint32_t a) const;

  friend bool operator==(const Modulus& l, const Modulus& r) { return l.q_ == r.q_; }

 private:
  std::uint32_t q_;
  bool is_prime_;
  bool is_odd_prime_;
};

// Element of Z_q^n, entries stored canonically in [0, q).
class ZqVector {
 public:
  ZqVector(std::vector<std::uint32_t> entries, Modulus modulus);

  std::uint32_t dimension() const { return static_cast<std::uint32_t>(entries_.size()); }
  const Modulus& modulus() const { return modulus_; }
  const std::vector<std::uint32_t>& entries() const { return entries_; }
  std::uint32_t operator[](std::size_t i) const { return entries_[i]; }

  friend bool operator==(const ZqVector& l, const ZqVector& r) {
    return l.modulus_ == r.modulus_ && l.entries_ == r.entries_;
  }

 private:
  std::vector<std::uint32_t> entries_;
  Modulus modulus_;
};

// The error distribution chi over Z_q: a discrete Gaussian of width sigma
// centered at zero, folded into one period. Immutable after construction.
class DiscreteGaussian {
 public:
  DiscreteGaussian(double sigma, Modulus modulus, std::vector<double> pmf);

  double sigma() const { return sigma_; }
  const Modulus& modulus() const { return modulus_; }
  const std::vector<double>& pmf() const { return pmf_; }
  double pmf_at(std::uint32_t x) const { return pmf_[x]; }
  // cumulative table used by inverse-CDF sampling
  const std::vector<double>& cdf() const { return cdf_; }

  std::string to_json() const;
  static DiscreteGaussian from_json(const std::string& text);

 private:
  double sigma_;
  Modulus modulus_;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

// pmf[x] proportional to the Gaussian mass of every integer representative
// of x within 10*sigma (at least one period), normalized to sum 1.
DiscreteGaussian make_gaussian(double sigma, Modulus q);

// count i.i.d. draws by inverse-CDF lookup over the fixed pmf table.
std::vector<std::uint32_t> sample_error(const DiscreteGaussian& chi, RandomSeed seed,
                                        std::size_t count);

// chi_hat(y) = sum_x pmf[x] * omega^{x y}, omega = exp(2*pi*i/q).
std::complex<double> fourier_coefficient(const DiscreteGaussian& chi, std::uint32_t y);

enum class LogBase { two, e };

// -sum p log p with 0 log 0 = 0. pmf must be nonnegative and sum to 1
// within 1e-9.
double shannon_entropy(std::span<const double> pmf, LogBase base);

// <a, s> mod q; moduli and dimensions must agree.
std::uint32_t inner_product(const ZqVector& a, const ZqVector& s);

}  // namespace lwelab
