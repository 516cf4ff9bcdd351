#include "lwelab/gkp.hpp"

#include <cmath>
#include <stdexcept>

namespace lwelab {

LatticeCode::LatticeCode(Modulus q) : LatticeCode(q, q.value() / 4.0) {}

LatticeCode::LatticeCode(Modulus q, double correctable_radius)
    : q_(q), radius_(correctable_radius) {
  if (!(radius_ > 0.0) || radius_ > q.value() / 2.0)
    throw std::invalid_argument("LatticeCode: radius must lie in (0, q/2]");
}

DecodeResult decode_displacement(const LatticeCode& code, std::uint32_t value) {
  const std::int64_t r = code.modulus().signed_representative(value);
  const bool within = std::abs(double(r)) <= code.correctable_radius();
  return DecodeResult{!within, SyndromeRecord{r, within, 0}};
}

double logical_error_probability(const LatticeCode& code, const DiscreteGaussian& chi) {
  if (!(chi.modulus() == code.modulus()))
    throw std::invalid_argument("logical_error_probability: modulus mismatch");
  const std::uint32_t q = code.modulus().value();
  double tail = 0.0;
  for (std::uint32_t x = 0; x < q; ++x) {
    const std::int64_t r = code.modulus().signed_representative(x);
    if (std::abs(double(r)) > code.correctable_radius()) tail += chi.pmf_at(x);
  }
  return tail;
}

double concatenated_error_rate(const LatticeCode& code, const DiscreteGaussian& chi,
                               std::uint32_t m) {
  if (m < 1 || m % 2 == 0)
    throw std::invalid_argument("concatenated_error_rate: m must be odd and >= 1");
  const double p = logical_error_probability(code, chi);
  // P(majority of m i.i.d. residuals decode wrongly), exact binomial tail
  double rate = 0.0;
  for (std::uint32_t k = (m + 1) / 2; k <= m; ++k) {
    double log_c = std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0);
    if (p == 0.0) continue;
    if (p == 1.0) {
      rate = 1.0;
      break;
    }
    rate += std::exp(log_c + k * std::log(p) + (m - k) * std::log1p(-p));
  }
  return std::min(rate, 1.0);
}

std::vector<SyndromeRecord> lwe_residual_syndromes(const InstanceSet& samples,
                                                   const SecretKey& candidate,
                                                   const LatticeCode& code) {
  const Modulus q = code.modulus();
  if (!(samples.params().q == q) || !(candidate.s.modulus() == q))
    throw std::invalid_argument("lwe_residual_syndromes: modulus mismatch");
  std::vector<SyndromeRecord> records;
  records.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& sample = samples.samples()[i];
    const std::uint32_t residual = q.sub(sample.b, inner_product(sample.a, candidate.s));
    const std::int64_t r = q.signed_representative(residual);
    records.push_back(
        SyndromeRecord{r, std::abs(double(r)) <= code.correctable_radius(), i});
  }
  return records;
}

Confirmation key_confirmation(const InstanceSet& samples, const SecretKey& candidate,
                              const LatticeCode& code, double min_fraction) {
  if (samples.size() == 0)
    throw std::invalid_argument("key_confirmation: empty sample list");
  const auto records = lwe_residual_syndromes(samples, candidate, code);
  std::size_t within = 0;
  for (const auto& r : records) within += r.within_radius ? 1 : 0;
  const double fraction = double(within) / double(records.size());
  return fraction >= min_fraction ? Confirmation::accept : Confirmation::reject;
}

}  // namespace lwelab
