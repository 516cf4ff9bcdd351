#include "lwelab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lwelab/errors.hpp"

namespace lwelab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

std::uint64_t checked_register_dim(std::uint32_t n, const Modulus& q) {
  std::uint64_t dim = 1;
  for (std::uint32_t i = 0; i < n + 1; ++i) {
    dim *= q.value();
    if (dim > StateVector::kMaxAmplitudes)
      throw CapacityExceeded("StateVector: q^(n+1) exceeds 2^24 amplitudes");
  }
  return dim;
}

// One q-dimensional DFT across the coordinate with the given stride.
void apply_dft(std::vector<std::complex<double>>& amp, std::uint32_t q,
               std::uint64_t stride, bool inverse) {
  std::vector<std::complex<double>> twiddle(q);
  const double sign = inverse ? -1.0 : 1.0;
  for (std::uint32_t k = 0; k < q; ++k)
    twiddle[k] = std::polar(1.0, sign * kTwoPi * double(k) / double(q));
  const double scale = 1.0 / std::sqrt(double(q));

  std::vector<std::complex<double>> scratch(q);
  const std::uint64_t block = stride * q;
  for (std::uint64_t base = 0; base < amp.size(); base += block) {
    for (std::uint64_t lo = 0; lo < stride; ++lo) {
      for (std::uint32_t k = 0; k < q; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::uint32_t j = 0; j < q; ++j) {
          acc += amp[base + lo + std::uint64_t(j) * stride] *
                 twiddle[std::uint64_t(j) * k % q];
        }
        scratch[k] = acc * scale;
      }
      for (std::uint32_t k = 0; k < q; ++k)
        amp[base + lo + std::uint64_t(k) * stride] = scratch[k];
    }
  }
}

void apply_register(StateVector& state, std::vector<std::complex<double>>& amp,
                    Register reg, bool inverse) {
  const std::uint32_t q = state.modulus().value();
  if (reg == Register::output) {
    apply_dft(amp, q, 1, inverse);
    return;
  }
  std::uint64_t stride = q;  // innermost input coordinate a_n
  for (std::uint32_t i = 0; i < state.n(); ++i) {
    apply_dft(amp, q, stride, inverse);
    stride *= q;
  }
}

}  // namespace

StateVector::StateVector(std::uint32_t n, Modulus q) : n_(n), q_(q) {
  if (n < 1) throw std::invalid_argument("StateVector: n must be >= 1");
  amp_.assign(checked_register_dim(n, q), {0.0, 0.0});
  amp_[0] = {1.0, 0.0};
}

StateVector StateVector::basis(std::uint32_t n, Modulus q,
                               std::span<const std::uint32_t> a, std::uint32_t b) {
  StateVector state(n, q);
  if (a.size() != n) throw std::invalid_argument("StateVector::basis: wrong arity");
  if (b >= q.value()) throw std::invalid_argument("StateVector::basis: b out of range");
  state.amp_[0] = {0.0, 0.0};
  state.amp_[state.flat(a) * q.value() + b] = {1.0, 0.0};
  return state;
}

StateVector StateVector::from_amplitudes(std::uint32_t n, Modulus q,
                                         std::vector<std::complex<double>> amplitudes) {
  StateVector state(n, q);
  if (amplitudes.size() != state.dim())
    throw std::invalid_argument("StateVector::from_amplitudes: wrong length");
  state.amp_ = std::move(amplitudes);
  if (std::abs(state.norm_squared() - 1.0) > 1e-9)
    throw std::invalid_argument("StateVector::from_amplitudes: not normalized");
  return state;
}

double StateVector::norm_squared() const {
  double acc = 0.0;
  for (const auto& a : amp_) acc += std::norm(a);
  return acc;
}

std::vector<std::uint32_t> StateVector::digits(std::uint64_t a_flat) const {
  std::vector<std::uint32_t> out(n_);
  for (std::uint32_t i = n_; i-- > 0;) {
    out[i] = static_cast<std::uint32_t>(a_flat % q_.value());
    a_flat /= q_.value();
  }
  return out;
}

std::uint64_t StateVector::flat(std::span<const std::uint32_t> a) const {
  std::uint64_t acc = 0;
  for (std::uint32_t digit : a) {
    if (digit >= q_.value())
      throw std::invalid_argument("StateVector::flat: digit out of range");
    acc = acc * q_.value() + digit;
  }
  return acc;
}

std::pair<StateVector, ErrorRealization> prepare_lwe_state(const SecretKey& key,
                                                           const DiscreteGaussian& chi,
                                                           RandomSeed seed) {
  const Modulus q = key.s.modulus();
  if (!(chi.modulus() == q))
    throw std::invalid_argument("prepare_lwe_state: chi modulus mismatch");
  const std::uint32_t n = key.s.dimension();
  StateVector state(n, q);
  const std::uint64_t inputs = state.input_dim();

  ErrorRealization realization{sample_error(chi, seed, inputs)};
  const double amp = 1.0 / std::sqrt(double(inputs));

  state.at(0, 0) = {0.0, 0.0};
  for (std::uint64_t a_flat = 0; a_flat < inputs; ++a_flat) {
    const auto a_digits = state.digits(a_flat);
    const std::uint32_t ip = inner_product(ZqVector(a_digits, q), key.s);
    const std::uint32_t b = q.add(ip, realization.e[a_flat]);
    state.at(a_flat, b) = {amp, 0.0};
  }
  return {std::move(state), std::move(realization)};
}

void qft(StateVector& state, Register reg) { apply_register(state, state.amp_, reg, false); }

void inverse_qft(StateVector& state, Register reg) {
  apply_register(state, state.amp_, reg, true);
}

namespace {

// Marginal Born probabilities of a whole register.
std::vector<double> register_probabilities(const StateVector& state, Register reg) {
  const std::uint32_t q = state.modulus().value();
  const std::uint64_t inputs = state.input_dim();
  if (reg == Register::output) {
    std::vector<double> probs(q, 0.0);
    for (std::uint64_t a = 0; a < inputs; ++a)
      for (std::uint32_t b = 0; b < q; ++b) probs[b] += std::norm(state.at(a, b));
    return probs;
  }
  std::vector<double> probs(inputs, 0.0);
  for (std::uint64_t a = 0; a < inputs; ++a)
    for (std::uint32_t b = 0; b < q; ++b) probs[a] += std::norm(state.at(a, b));
  return probs;
}

double outcome_mass(const StateVector& state, Register reg, std::uint64_t kept) {
  const std::uint32_t q = state.modulus().value();
  const std::uint64_t inputs = state.input_dim();
  double mass = 0.0;
  if (reg == Register::output) {
    for (std::uint64_t a = 0; a < inputs; ++a)
      mass += std::norm(state.at(a, static_cast<std::uint32_t>(kept)));
  } else {
    for (std::uint32_t b = 0; b < q; ++b) mass += std::norm(state.at(kept, b));
  }
  return mass;
}

double collapse(StateVector& state, Register reg, std::uint64_t kept) {
  const std::uint32_t q = state.modulus().value();
  const std::uint64_t inputs = state.input_dim();
  const double mass = outcome_mass(state, reg, kept);
  if (mass <= 0.0)
    throw std::invalid_argument("project_register: zero-probability outcome");
  const double scale = 1.0 / std::sqrt(mass);
  for (std::uint64_t a = 0; a < inputs; ++a) {
    for (std::uint32_t b = 0; b < q; ++b) {
      const bool keep = reg == Register::output ? (b == kept) : (a == kept);
      auto& amp = state.at(a, b);
      amp = keep ? amp * scale : std::complex<double>{0.0, 0.0};
    }
  }
  return mass;
}

}  // namespace

std::vector<std::uint32_t> measure_register(StateVector& state, Register reg,
                                            RandomSeed seed) {
  const auto probs = register_probabilities(state, reg);
  Rng rng(seed);
  const double u = rng.unit();
  double acc = 0.0;
  std::uint64_t outcome = probs.size() - 1;
  for (std::uint64_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) {
      outcome = i;
      break;
    }
  }
  collapse(state, reg, outcome);
  if (reg == Register::output) return {static_cast<std::uint32_t>(outcome)};
  return state.digits(outcome);
}

namespace {

std::uint64_t outcome_index(const StateVector& state, Register reg,
                            std::span<const std::uint32_t> outcome) {
  if (reg == Register::output) {
    if (outcome.size() != 1)
      throw std::invalid_argument("project_register: output register takes one digit");
    if (outcome[0] >= state.modulus().value())
      throw std::invalid_argument("project_register: outcome out of range");
    return outcome[0];
  }
  if (outcome.size() != state.n())
    throw std::invalid_argument("project_register: wrong input-register arity");
  return state.flat(outcome);
}

}  // namespace

double project_register(StateVector& state, Register reg,
                        std::span<const std::uint32_t> outcome) {
  return collapse(state, reg, outcome_index(state, reg, outcome));
}

double outcome_probability(const StateVector& state, Register reg,
                           std::span<const std::uint32_t> outcome) {
  return outcome_mass(state, reg, outcome_index(state, reg, outcome));
}

ExtractResult gkz_extract_candidate(StateVector& state, RandomSeed seed) {
  const Modulus q = state.modulus();
  if (!q.is_odd_prime())
    throw UnsupportedModulus("gkz_extract_candidate: q must be an odd prime");

  qft(state, Register::output);
  const std::uint32_t y = measure_register(state, Register::output, derive_seed(seed, 0))[0];
  if (y == 0) return ExtractResult{0, std::nullopt};

  inverse_qft(state, Register::input);
  const auto z = measure_register(state, Register::input, derive_seed(seed, 1));

  const std::uint32_t y_inv = q.inverse(y);
  std::vector<std::uint32_t> s(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) s[i] = q.mul(y_inv, z[i]);
  return ExtractResult{y, SecretKey{ZqVector(std::move(s), q)}};
}

double predicted_success_probability(const DiscreteGaussian& chi, std::uint32_t n,
                                     std::uint32_t y) {
  if (y == 0 || y >= chi.modulus().value())
    throw std::invalid_argument("predicted_success_probability: y must be a nonzero residue");
  const double mag2 = std::norm(fourier_coefficient(chi, y));
  const double qn = std::pow(double(chi.modulus().value()), double(n));
  return mag2 + (1.0 - mag2) / qn;
}

AttackReport gkz_attack(const SecretKey& key, const DiscreteGaussian& chi,
                        std::size_t max_samples, std::size_t confirm_threshold,
                        RandomSeed seed, const AttackOptions& options) {
  const Modulus q = key.s.modulus();
  if (!q.is_odd_prime()) throw UnsupportedModulus("gkz_attack: q must be an odd prime");
  if (confirm_threshold < 1)
    throw std::invalid_argument("gkz_attack: confirm_threshold must be >= 1");
  const LatticeCode code =
      options.radius > 0.0 ? LatticeCode(q, options.radius) : LatticeCode(q);

  AttackReport report;
  for (std::size_t trial = 0; trial < max_samples; ++trial) {
    auto [state, realization] = prepare_lwe_state(key, chi, derive_seed(seed, 3 * trial));
    auto extracted = gkz_extract_candidate(state, derive_seed(seed, 3 * trial + 1));
    ++report.samples_consumed;

    TrialRecord record{extracted.y, extracted.candidate, false,
                       derive_seed(seed, 3 * trial + 2)};
    if (extracted.candidate) {
      const InstanceSet confirm =
          sample_lwe(key, chi, confirm_threshold, record.confirm_seed);
      record.confirmed = key_confirmation(confirm, *extracted.candidate, code,
                                          options.min_fraction) == Confirmation::accept;
    }
    report.per_trial_log.push_back(record);
    if (record.confirmed) {
      report.recovered = extracted.candidate;
      break;
    }
  }
  return report;
}

std::vector<ComplexityRow> sample_complexity_sweep(std::span<const std::uint32_t> n_values,
                                                   Modulus q, double sigma, double eta,
                                                   std::size_t trials,
                                                   std::size_t confirm_threshold,
                                                   RandomSeed seed,
                                                   const AttackOptions& options) {
  if (!(eta > 0.0) || eta >= 1.0)
    throw std::invalid_argument("sample_complexity_sweep: eta must lie in (0, 1)");
  if (trials < 1) throw std::invalid_argument("sample_complexity_sweep: trials must be >= 1");
  constexpr std::size_t kBudgetCap = 512;
  const DiscreteGaussian chi = make_gaussian(sigma, q);

  std::vector<ComplexityRow> table;
  for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
    const std::uint32_t n = n_values[ni];
    // One pool of seeded attacks at the budget cap; success within budget B
    // is then "recovered with samples_consumed <= B", so every budget the
    // search probes reuses the same trials.
    std::vector<std::size_t> consumed;
    consumed.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      const RandomSeed trial_seed = derive_seed(seed, ni * trials + t);
      const SecretKey key = gen_secret(n, q, derive_seed(trial_seed, 0));
      const AttackReport report = gkz_attack(key, chi, kBudgetCap, confirm_threshold,
                                             derive_seed(trial_seed, 1), options);
      const bool correct = report.recovered && *report.recovered == key;
      consumed.push_back(correct ? report.samples_consumed : kBudgetCap + 1);
    }
    auto success_rate = [&](std::size_t budget) {
      std::size_t ok = 0;
      for (std::size_t c : consumed) ok += c <= budget ? 1 : 0;
      return double(ok) / double(trials);
    };
    std::size_t lo = 1, hi = kBudgetCap;
    if (success_rate(kBudgetCap) < 1.0 - eta) {
      table.push_back(ComplexityRow{n, kBudgetCap, success_rate(kBudgetCap)});
      continue;
    }
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (success_rate(mid) >= 1.0 - eta) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    table.push_back(ComplexityRow{n, lo, success_rate(lo)});
  }
  return table;
}

}  // namespace lwelab
