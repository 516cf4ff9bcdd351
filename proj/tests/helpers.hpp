#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "lwelab/rng.hpp"

namespace testutil {

using Cx = std::complex<double>;

// Pearson statistic of observed counts against expected probabilities.
inline double chi_squared(const std::vector<std::size_t>& counts,
                          const std::vector<double>& probs) {
  std::size_t total = 0;
  for (auto c : counts) total += c;
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = probs[i] * double(total);
    if (expected == 0.0) continue;
    const double d = double(counts[i]) - expected;
    stat += d * d / expected;
  }
  return stat;
}

// Cyclic complex Jacobi eigensolver. Deliberately separate from the Eigen
// path used by the library so the two can cross-check each other.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<Cx>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a[p][q]);
    if (off < 1e-26) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Cx apq = a[p][q];
        const double g = std::abs(apq);
        if (g < 1e-18) continue;
        const Cx phase = apq / g;
        const double app = a[p][p].real();
        const double aqq = a[q][q].real();
        const double tau = (aqq - app) / (2.0 * g);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // columns: A <- A R with R = [[c, s*phase], [-s*conj(phase), c]]
        for (std::size_t k = 0; k < n; ++k) {
          const Cx kp = a[k][p], kq = a[k][q];
          a[k][p] = c * kp - s * std::conj(phase) * kq;
          a[k][q] = s * phase * kp + c * kq;
        }
        // rows: A <- R^dagger A
        for (std::size_t k = 0; k < n; ++k) {
          const Cx pk = a[p][k], qk = a[q][k];
          a[p][k] = c * pk - s * phase * qk;
          a[q][k] = s * std::conj(phase) * pk + c * qk;
        }
      }
    }
  }
  std::vector<double> eigenvalues(n);
  for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = a[i][i].real();
  return eigenvalues;
}

// Ginibre-random density matrix rows (G G^dagger normalized to trace 1).
inline std::vector<std::vector<Cx>> random_density_rows(std::size_t d, lwelab::Rng& rng) {
  std::vector<std::vector<Cx>> g(d, std::vector<Cx>(d));
  for (auto& row : g)
    for (auto& v : row) v = Cx(rng.normal(), rng.normal());
  std::vector<std::vector<Cx>> rho(d, std::vector<Cx>(d, Cx(0, 0)));
  double trace = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      Cx acc(0, 0);
      for (std::size_t k = 0; k < d; ++k) acc += g[i][k] * std::conj(g[j][k]);
      rho[i][j] = acc;
    }
    trace += rho[i][i].real();
  }
  for (auto& row : rho)
    for (auto& v : row) v /= trace;
  return rho;
}

// P(Bin(n, p) >= k_min), exact.
inline double binomial_tail(std::uint32_t n, double p, std::uint32_t k_min) {
  if (k_min == 0) return 1.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return k_min <= n ? 1.0 : 0.0;
  double tail = 0.0;
  for (std::uint32_t k = k_min; k <= n; ++k) {
    const double log_c =
        std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    tail += std::exp(log_c + k * std::log(p) + (n - k) * std::log1p(-p));
  }
  return tail;
}

struct LineFit {
  double slope;
  double intercept;
  double r_squared;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double fit = slope * x[i] + intercept;
    ss_res += (y[i] - fit) * (y[i] - fit);
    ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
  }
  return LineFit{slope, intercept, ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0};
}

}  // namespace testutil
