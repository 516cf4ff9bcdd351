#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "lwelab/ring.hpp"

namespace lwelab {

// Trace-1 Hermitian PSD operator; invariants enforced at construction
// (Hermitian and unit trace within 1e-10, eigenvalues >= -1e-10).
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd entries);

  Eigen::Index dimension() const { return entries_.rows(); }
  const Eigen::MatrixXcd& entries() const { return entries_; }

 private:
  Eigen::MatrixXcd entries_;
};

struct BoundReport {
  std::string quantity_name;
  double computed_value;
  double bound_value;
  bool satisfied;  // computed <= bound + 1e-9
  double slack;    // bound - computed
};

// H(p) in bits, H(0) = H(1) = 0.
double binary_entropy(double p);

// H(P_e) + P_e * log2(|S| - 1), the Fano ceiling on H(s|c) in bits.
double fano_bound(double p_e, std::uint64_t secret_space_size);

struct ConditionalEntropy {
  double h_bits;     // exact H(s|c)
  double map_error;  // MAP decoder error probability
};

// Brute-force enumeration of the joint distribution of a uniform secret and
// m LWE samples. Guarded to tiny (n, q, m).
ConditionalEntropy exact_conditional_entropy(std::uint32_t n, Modulus q,
                                             const DiscreteGaussian& chi, std::uint32_t m);

struct CapacityResult {
  double closed_form_bits;  // log2 q - H(chi)
  double iterative_bits;    // Blahut-Arimoto maximization
  std::size_t iterations;

  double bits() const { return closed_form_bits; }
};

// Capacity of Y = X + E mod q with E ~ chi, computed both in closed form
// and by alternating maximization; throws NumericalFailure if the two
// disagree beyond 1e-6 or the iteration fails to converge.
CapacityResult additive_channel_capacity(const DiscreteGaussian& chi);

// -sum lambda log2 lambda over the spectrum.
double von_neumann_entropy(const DensityMatrix& rho);

// Half the sum of absolute eigenvalues of rho - sigma.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma_state);

// |S(rho) - S(sigma)| <= T log2(d-1) + H(T); holds for every valid pair,
// so a reported violation signals an implementation bug.
BoundReport fannes_audenaert_check(const DensityMatrix& rho,
                                   const DensityMatrix& sigma_state);

struct LweStatePair {
  DensityMatrix ideal;   // pure noiseless quantum sample for the reference key
  DensityMatrix noisy;   // chi-mixture over error realizations
  std::string mode;      // construction mode recorded for the caller
};

// Reference key s = (1, 2, ..., n) mod q. Dimension q^{n+1} <= 2^12.
LweStatePair lwe_state_pair(std::uint32_t n, Modulus q, const DiscreteGaussian& chi);

}  // namespace lwelab
