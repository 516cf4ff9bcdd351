#include "lwelab/info_bounds.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lwelab/errors.hpp"
#include "lwelab/lwe.hpp"

namespace lwelab {

namespace {

constexpr double kLog2 = 0.6931471805599453094172321;

double log2_safe(double v) { return std::log(v) / kLog2; }

// compensated accumulator; the conditional-entropy enumeration adds tens of
// millions of terms and naive summation drifts past the 1e-9 theorem slack
struct KahanSum {
  double sum = 0.0;
  double compensation = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      compensation += (sum - t) + v;
    } else {
      compensation += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + compensation; }
};

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalFailure("eigenvalue decomposition failed", {});
  std::vector<double> out(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
  return out;
}

}  // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1)
    throw std::invalid_argument("DensityMatrix: must be square and nonempty");
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-10");
  if (std::abs(entries_.trace().real() - 1.0) > 1e-10 ||
      std::abs(entries_.trace().imag()) > 1e-10)
    throw std::invalid_argument("DensityMatrix: trace must be 1 within 1e-10");
  const auto eigenvalues = hermitian_eigenvalues(entries_);
  for (double v : eigenvalues) {
    if (v < -1e-10)
      throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond tolerance");
  }
}

double binary_entropy(double p) {
  if (!(p >= 0.0) || p > 1.0)
    throw std::invalid_argument("binary_entropy: p must lie in [0, 1]");
  double h = 0.0;
  if (p > 0.0) h -= p * log2_safe(p);
  if (p < 1.0) h -= (1.0 - p) * log2_safe(1.0 - p);
  return h;
}

double fano_bound(double p_e, std::uint64_t secret_space_size) {
  if (secret_space_size < 2)
    throw std::invalid_argument("fano_bound: secret space must have at least 2 elements");
  return binary_entropy(p_e) + p_e * log2_safe(double(secret_space_size - 1));
}

ConditionalEntropy exact_conditional_entropy(std::uint32_t n, Modulus q,
                                             const DiscreteGaussian& chi, std::uint32_t m) {
  if (!(chi.modulus() == q))
    throw std::invalid_argument("exact_conditional_entropy: chi modulus mismatch");
  if (n < 1) throw std::invalid_argument("exact_conditional_entropy: n must be >= 1");
  const double qd = q.value();
  const double work = std::pow(qd, double(n) * m + m + n);
  if (work > double(1ull << 28))
    throw CapacityExceeded("exact_conditional_entropy: enumeration too large");

  const std::uint64_t secrets = std::uint64_t(std::llround(std::pow(qd, double(n))));
  if (m == 0) {
    return ConditionalEntropy{double(n) * log2_safe(qd), 1.0 - 1.0 / double(secrets)};
  }

  // inner products <a, s> for every (a, s) pair of flat indices
  const std::uint32_t qv = q.value();
  std::vector<std::uint32_t> ip(secrets * secrets);
  {
    auto digits = [&](std::uint64_t flat) {
      std::vector<std::uint32_t> d(n);
      for (std::uint32_t i = n; i-- > 0;) {
        d[i] = flat % qv;
        flat /= qv;
      }
      return d;
    };
    for (std::uint64_t a = 0; a < secrets; ++a) {
      const auto da = digits(a);
      for (std::uint64_t s = 0; s < secrets; ++s) {
        const auto ds = digits(s);
        std::uint64_t acc = 0;
        for (std::uint32_t i = 0; i < n; ++i) acc = (acc + std::uint64_t(da[i]) * ds[i]) % qv;
        ip[a * secrets + s] = static_cast<std::uint32_t>(acc);
      }
    }
  }

  std::vector<std::uint64_t> a_tuple(m, 0);
  std::vector<std::uint32_t> b_tuple(m, 0);
  std::vector<double> w(secrets);
  KahanSum h_acc;
  KahanSum pe_acc;

  auto next = [](auto& digits_vec, std::uint64_t base) {
    for (std::size_t i = digits_vec.size(); i-- > 0;) {
      if (std::uint64_t(++digits_vec[i]) < base) return true;
      digits_vec[i] = 0;
    }
    return false;
  };

  do {
    std::fill(b_tuple.begin(), b_tuple.end(), 0);
    do {
      double total = 0.0;
      double max_w = 0.0;
      for (std::uint64_t s = 0; s < secrets; ++s) {
        double likelihood = 1.0;
        for (std::uint32_t i = 0; i < m; ++i) {
          likelihood *= chi.pmf_at(q.sub(b_tuple[i], ip[a_tuple[i] * secrets + s]));
          if (likelihood == 0.0) break;
        }
        w[s] = likelihood;
        total += likelihood;
        max_w = std::max(max_w, likelihood);
      }
      if (total > 0.0) {
        for (std::uint64_t s = 0; s < secrets; ++s) {
          if (w[s] > 0.0) h_acc.add(-w[s] * log2_safe(w[s] / total));
        }
        pe_acc.add(total - max_w);
      }
    } while (next(b_tuple, qv));
  } while (next(a_tuple, secrets));

  const double scale = std::pow(qd, -double(n) * (m + 1.0));
  return ConditionalEntropy{h_acc.value() * scale, pe_acc.value() * scale};
}

CapacityResult additive_channel_capacity(const DiscreteGaussian& chi) {
  const std::uint32_t q = chi.modulus().value();
  const double h_nats = shannon_entropy(chi.pmf(), LogBase::e);
  const double closed_form = (std::log(double(q)) - h_nats) / kLog2;

  // Alternating maximization of I(X;Y) for W(y|x) = pmf[y-x]; the
  // lower/upper bracket tightens to 1e-9 bits.
  const double tol_nats = 1e-9 * kLog2;
  constexpr std::size_t kMaxIterations = 10000;
  std::vector<double> p(q, 1.0 / q);
  std::vector<double> out(q), c(q);
  std::vector<NumericalFailure::TracePoint> trace;

  for (std::size_t iter = 1; iter <= kMaxIterations; ++iter) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::uint32_t x = 0; x < q; ++x) {
      if (p[x] == 0.0) continue;
      for (std::uint32_t y = 0; y < q; ++y)
        out[y] += p[x] * chi.pmf_at((y + q - x) % q);
    }
    double upper = -1e300;
    double lower_sum = 0.0;
    for (std::uint32_t x = 0; x < q; ++x) {
      double d = 0.0;
      for (std::uint32_t y = 0; y < q; ++y) {
        const double wxy = chi.pmf_at((y + q - x) % q);
        if (wxy > 0.0) d += wxy * std::log(wxy / out[y]);
      }
      c[x] = d;
      upper = std::max(upper, d);
      lower_sum += p[x] * std::exp(d);
    }
    const double lower = std::log(lower_sum);
    trace.push_back({iter, lower / kLog2, upper / kLog2});
    if (upper - lower < tol_nats) {
      const double iterative = 0.5 * (lower + upper) / kLog2;
      if (std::abs(iterative - closed_form) > 1e-6)
        throw NumericalFailure("capacity paths disagree beyond 1e-6 bits", trace);
      return CapacityResult{closed_form, iterative, iter};
    }
    double norm = 0.0;
    for (std::uint32_t x = 0; x < q; ++x) {
      p[x] *= std::exp(c[x]);
      norm += p[x];
    }
    for (double& v : p) v /= norm;
  }
  throw NumericalFailure("capacity iteration did not converge", trace);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double h = 0.0;
  for (double v : hermitian_eigenvalues(rho.entries())) {
    if (v <= 0.0) continue;  // clamp tiny negatives from the solver
    h -= v * log2_safe(v);
  }
  return h;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma_state) {
  if (rho.dimension() != sigma_state.dimension())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  double acc = 0.0;
  for (double v : hermitian_eigenvalues(rho.entries() - sigma_state.entries()))
    acc += std::abs(v);
  return 0.5 * acc;
}

BoundReport fannes_audenaert_check(const DensityMatrix& rho,
                                   const DensityMatrix& sigma_state) {
  const auto d = rho.dimension();
  if (d < 2) throw std::invalid_argument("fannes_audenaert_check: dimension must be >= 2");
  if (d != sigma_state.dimension())
    throw std::invalid_argument("fannes_audenaert_check: dimension mismatch");
  double t = trace_distance(rho, sigma_state);
  t = std::min(std::max(t, 0.0), 1.0);
  const double lhs = std::abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma_state));
  const double rhs = (d > 2 ? t * log2_safe(double(d - 1)) : 0.0) + binary_entropy(t);
  return BoundReport{"fannes_audenaert", lhs, rhs, lhs <= rhs + 1e-9, rhs - lhs};
}

LweStatePair lwe_state_pair(std::uint32_t n, Modulus q, const DiscreteGaussian& chi) {
  if (!(chi.modulus() == q))
    throw std::invalid_argument("lwe_state_pair: chi modulus mismatch");
  if (n < 1) throw std::invalid_argument("lwe_state_pair: n must be >= 1");
  const std::uint32_t qv = q.value();
  double dim_check = 1.0;
  for (std::uint32_t i = 0; i < n + 1; ++i) {
    dim_check *= qv;
    if (dim_check > 4096.0)
      throw CapacityExceeded("lwe_state_pair: q^(n+1) exceeds 2^12");
  }
  const std::uint64_t inputs = std::uint64_t(std::llround(std::pow(double(qv), double(n))));
  const std::uint64_t dim = inputs * qv;

  // fixed reference key s = (1, 2, ..., n) mod q
  std::vector<std::uint32_t> s_entries(n);
  for (std::uint32_t i = 0; i < n; ++i) s_entries[i] = (i + 1) % qv;
  const SecretKey key{ZqVector(s_entries, q)};

  std::vector<std::uint32_t> ips(inputs);
  {
    std::vector<std::uint32_t> digits(n, 0);
    for (std::uint64_t a = 0; a < inputs; ++a) {
      std::uint64_t acc = 0;
      for (std::uint32_t i = 0; i < n; ++i) acc = (acc + std::uint64_t(digits[i]) * s_entries[i]) % qv;
      ips[a] = static_cast<std::uint32_t>(acc);
      for (std::size_t i = n; i-- > 0;) {
        if (++digits[i] < qv) break;
        digits[i] = 0;
      }
    }
  }

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index(dim));
  const double amp = 1.0 / std::sqrt(double(inputs));
  for (std::uint64_t a = 0; a < inputs; ++a)
    psi[Eigen::Index(a * qv + ips[a])] = amp;
  Eigen::MatrixXcd rho = psi * psi.adjoint();

  // The chi-mixture over joint error realizations in closed form: errors at
  // distinct a are independent, and coinciding a forces b = b'.
  Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(Eigen::Index(dim), Eigen::Index(dim));
  const double scale = 1.0 / double(inputs);
  for (std::uint64_t a = 0; a < inputs; ++a) {
    for (std::uint32_t b = 0; b < qv; ++b) {
      const double pb = chi.pmf_at(q.sub(b, ips[a]));
      for (std::uint64_t a2 = 0; a2 < inputs; ++a2) {
        for (std::uint32_t b2 = 0; b2 < qv; ++b2) {
          double value;
          if (a == a2) {
            value = (b == b2) ? scale * pb : 0.0;
          } else {
            value = scale * pb * chi.pmf_at(q.sub(b2, ips[a2]));
          }
          sigma(Eigen::Index(a * qv + b), Eigen::Index(a2 * qv + b2)) = value;
        }
      }
    }
  }
  return LweStatePair{DensityMatrix(std::move(rho)), DensityMatrix(std::move(sigma)),
                      "exact"};
}

}  // namespace lwelab
