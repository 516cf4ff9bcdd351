#include "lwelab/ring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "lwelab/errors.hpp"

namespace lwelab {

namespace {

bool trial_division_prime(std::uint32_t q) {
  if (q < 2) return false;
  if (q % 2 == 0) return q == 2;
  for (std::uint32_t d = 3; std::uint64_t(d) * d <= q; d += 2) {
    if (q % d == 0) return false;
  }
  return true;
}

constexpr double kTwoPi = 6.283185307179586476925287;

}  // namespace

Modulus::Modulus(std::uint32_t q) : q_(q) {
  if (q < 2) throw std::invalid_argument("Modulus: q must be >= 2");
  if (q > kMax) throw std::invalid_argument("Modulus: q above desk-scale limit 2^20");
  is_prime_ = trial_division_prime(q);
  is_odd_prime_ = is_prime_ && q != 2;
}

std::int64_t Modulus::signed_representative(std::uint32_t x) const {
  if (x >= q_) throw std::invalid_argument("signed_representative: residue out of range");
  // (-q/2, q/2]: for even q the boundary q/2 maps to +q/2
  return (2 * std::uint64_t(x) <= q_) ? std::int64_t(x) : std::int64_t(x) - q_;
}

std::uint32_t Modulus::reduce(std::int64_t v) const {
  std::int64_t r = v % std::int64_t(q_);
  if (r < 0) r += q_;
  return static_cast<std::uint32_t>(r);
}

std::uint32_t Modulus::inverse(std::uint32_t a) const {
  if (!is_prime_) throw UnsupportedModulus("inverse: requires prime q");
  if (a == 0) throw std::invalid_argument("inverse: zero is not invertible");
  // Fermat: a^(q-2) mod q
  std::uint64_t base = a % q_, acc = 1, e = q_ - 2;
  while (e > 0) {
    if (e & 1) acc = acc * base % q_;
    base = base * base % q_;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(acc);
}

ZqVector::ZqVector(std::vector<std::uint32_t> entries, Modulus modulus)
    : entries_(std::move(entries)), modulus_(modulus) {
  if (entries_.empty()) throw std::invalid_argument("ZqVector: dimension must be >= 1");
  for (std::uint32_t e : entries_) {
    if (e >= modulus_.value())
      throw std::invalid_argument("ZqVector: entry outside canonical range [0, q)");
  }
}

DiscreteGaussian::DiscreteGaussian(double sigma, Modulus modulus, std::vector<double> pmf)
    : sigma_(sigma), modulus_(modulus), pmf_(std::move(pmf)) {
  if (sigma_ <= 0.0 || !std::isfinite(sigma_))
    throw std::invalid_argument("DiscreteGaussian: sigma must be positive");
  const std::uint32_t q = modulus_.value();
  if (pmf_.size() != q) throw std::invalid_argument("DiscreteGaussian: pmf size != q");
  double sum = 0.0;
  for (double p : pmf_) {
    if (!(p >= 0.0)) throw std::invalid_argument("DiscreteGaussian: negative pmf entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("DiscreteGaussian: pmf must sum to 1 within 1e-12");
  for (std::uint32_t x = 1; x < q; ++x) {
    if (std::abs(pmf_[x] - pmf_[q - x]) > 1e-12)
      throw std::invalid_argument("DiscreteGaussian: pmf not symmetric under negation");
    if (pmf_[x] > pmf_[0] + 1e-15)
      throw std::invalid_argument("DiscreteGaussian: pmf not centered at zero");
  }
  cdf_.resize(q);
  double acc = 0.0;
  for (std::uint32_t x = 0; x < q; ++x) {
    acc += pmf_[x];
    cdf_[x] = acc;
  }
  cdf_[q - 1] = 1.0;
}

DiscreteGaussian make_gaussian(double sigma, Modulus q) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("make_gaussian: sigma must be positive");
  const std::uint32_t qv = q.value();

  // Past a few dozen periods the folded sum is uniform to far below double
  // precision (the deficit is O(exp(-2 pi^2 sigma^2 / q^2))), so skip the
  // O(sigma/q) term walk.
  if (sigma >= 64.0 * qv) {
    std::vector<double> pmf(qv, 1.0 / qv);
    // exact renormalization when q does not divide the mantissa nicely
    double sum = std::accumulate(pmf.begin(), pmf.end(), 0.0);
    for (double& p : pmf) p /= sum;
    return DiscreteGaussian(sigma, q, pmf);
  }

  const double window = 10.0 * sigma;
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> weight(qv, 0.0);
  for (std::uint32_t x = 0; x < qv; ++x) {
    const double r0 = static_cast<double>(q.signed_representative(x));
    double acc = std::exp(-r0 * r0 * inv2s2);  // never fewer than one period
    for (std::int64_t k = 1;; ++k) {
      const double rp = r0 + double(k) * qv;
      const double rm = r0 - double(k) * qv;
      bool any = false;
      if (std::abs(rp) <= window) {
        acc += std::exp(-rp * rp * inv2s2);
        any = true;
      }
      if (std::abs(rm) <= window) {
        acc += std::exp(-rm * rm * inv2s2);
        any = true;
      }
      if (!any) break;
    }
    weight[x] = acc;
  }
  const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
  for (double& w : weight) w /= total;
  // force exact negation symmetry against rounding drift
  for (std::uint32_t x = 1; 2 * x < qv; ++x) {
    const double mean = 0.5 * (weight[x] + weight[qv - x]);
    weight[x] = weight[qv - x] = mean;
  }
  const double total2 = std::accumulate(weight.begin(), weight.end(), 0.0);
  for (double& w : weight) w /= total2;
  return DiscreteGaussian(sigma, q, std::move(weight));
}

std::vector<std::uint32_t> sample_error(const DiscreteGaussian& chi, RandomSeed seed,
                                        std::size_t count) {
  if (count < 1) throw std::invalid_argument("sample_error: count must be >= 1");
  Rng rng(seed);
  const auto& cdf = chi.cdf();
  std::vector<std::uint32_t> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = rng.unit();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    out[i] = static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(
        it - cdf.begin(), std::ptrdiff_t(cdf.size()) - 1));
  }
  return out;
}

std::complex<double> fourier_coefficient(const DiscreteGaussian& chi, std::uint32_t y) {
  const std::uint32_t q = chi.modulus().value();
  if (y >= q) throw std::invalid_argument("fourier_coefficient: y out of range");
  std::complex<double> acc(0.0, 0.0);
  for (std::uint32_t x = 0; x < q; ++x) {
    const std::uint64_t xy = std::uint64_t(x) * y % q;
    acc += chi.pmf_at(x) * std::polar(1.0, kTwoPi * double(xy) / double(q));
  }
  return acc;
}

double shannon_entropy(std::span<const double> pmf, LogBase base) {
  double sum = 0.0;
  for (double p : pmf) {
    if (p < 0.0) throw std::invalid_argument("shannon_entropy: negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("shannon_entropy: pmf must sum to 1 within 1e-9");
  double h = 0.0;
  for (double p : pmf) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return base == LogBase::two ? h / std::log(2.0) : h;
}

std::uint32_t inner_product(const ZqVector& a, const ZqVector& s) {
  if (!(a.modulus() == s.modulus()))
    throw std::invalid_argument("inner_product: modulus mismatch");
  if (a.dimension() != s.dimension())
    throw std::invalid_argument("inner_product: dimension mismatch");
  const std::uint32_t q = a.modulus().value();
  std::uint64_t acc = 0;
  for (std::uint32_t i = 0; i < a.dimension(); ++i) {
    acc = (acc + std::uint64_t(a[i]) * s[i]) % q;
  }
  return static_cast<std::uint32_t>(acc);
}

std::string DiscreteGaussian::to_json() const {
  nlohmann::json j;
  j["q"] = modulus_.value();
  j["sigma"] = sigma_;
  j["pmf"] = pmf_;
  return j.dump(2) + "\n";
}

DiscreteGaussian DiscreteGaussian::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Modulus q(j.at("q").get<std::uint32_t>());
  return DiscreteGaussian(j.at("sigma").get<double>(), q,
                          j.at("pmf").get<std::vector<double>>());
}

}  // namespace lwelab
