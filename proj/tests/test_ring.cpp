#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "lwelab/errors.hpp"
#include "lwelab/ring.hpp"

using namespace lwelab;

namespace {

// golden values from tests/tools/make_golden.py (60-digit direct summation)
constexpr double kGoldenPmfQ7S1[7] = {
    0.39894227828513115,   0.24197072930034848,  0.053992452943812065,
    0.0045656786132738822, 0.0045656786132738822, 0.053992452943812065,
    0.24197072930034848};
constexpr double kGoldenFourierY1 = 0.66841887172519204;
constexpr double kGoldenEntropyBits = 2.0453023247648053;
constexpr double kGoldenEntropyNats = 1.4176955398034264;
constexpr double kChi2Crit999Df6 = 22.457744;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("modulus construction and primality") {
  CHECK_THROWS_AS(Modulus(0), std::invalid_argument);
  CHECK_THROWS_AS(Modulus(1), std::invalid_argument);
  CHECK_THROWS_AS(Modulus((1u << 20) + 1), std::invalid_argument);
  CHECK(Modulus(2).is_prime());
  CHECK_FALSE(Modulus(2).is_odd_prime());
  CHECK(Modulus(7).is_odd_prime());
  CHECK_FALSE(Modulus(9).is_prime());
  CHECK(Modulus(1u << 20).value() == 1u << 20);
  CHECK(Modulus(65537).is_odd_prime());
}

TEST_CASE("signed representatives live in (-q/2, q/2]") {
  const Modulus q8(8);
  CHECK(q8.signed_representative(0) == 0);
  CHECK(q8.signed_representative(4) == 4);
  CHECK(q8.signed_representative(5) == -3);
  CHECK(q8.signed_representative(7) == -1);
  const Modulus q7(7);
  CHECK(q7.signed_representative(3) == 3);
  CHECK(q7.signed_representative(4) == -3);
  CHECK_THROWS_AS(q7.signed_representative(7), std::invalid_argument);
}

TEST_CASE("gaussian pmf matches the high-precision summation oracle") {
  const auto chi = make_gaussian(1.0, Modulus(7));
  for (std::uint32_t x = 0; x < 7; ++x)
    CHECK(std::abs(chi.pmf_at(x) - kGoldenPmfQ7S1[x]) < 1e-12);
  // also via the JSON fixture written by the same oracle
  const auto fixture = DiscreteGaussian::from_json(
      read_file(std::string(LWELAB_TEST_DATA_DIR) + "/gaussian_q7_sigma1.json"));
  REQUIRE(fixture.modulus().value() == 7);
  for (std::uint32_t x = 0; x < 7; ++x)
    CHECK(std::abs(chi.pmf_at(x) - fixture.pmf_at(x)) < 1e-12);
}

TEST_CASE("gaussian limits: uniform and point mass") {
  SUBCASE("sigma -> infinity gives uniform") {
    const auto chi = make_gaussian(1e6 * 7, Modulus(7));
    for (std::uint32_t x = 0; x < 7; ++x)
      CHECK(std::abs(chi.pmf_at(x) - 1.0 / 7) < 1e-6);
  }
  SUBCASE("the uniform short-circuit agrees with the direct fold") {
    const auto direct = make_gaussian(63.9 * 5, Modulus(5));
    const auto fast = make_gaussian(64.1 * 5, Modulus(5));
    for (std::uint32_t x = 0; x < 5; ++x)
      CHECK(std::abs(direct.pmf_at(x) - fast.pmf_at(x)) < 1e-14);
  }
  SUBCASE("sigma -> 0 gives a point mass") {
    const auto chi = make_gaussian(1e-6, Modulus(7));
    CHECK(chi.pmf_at(0) >= 1.0 - 1e-12);
    for (std::uint32_t x = 1; x < 7; ++x) CHECK(chi.pmf_at(x) < 1e-12);
  }
}

TEST_CASE("gaussian invariants across a sigma x q sweep") {
  for (double sigma : {0.25, 0.7, 1.3, 3.9, 17.0}) {
    for (std::uint32_t qv : {2u, 3u, 5u, 7u, 8u, 12u, 17u}) {
      const auto chi = make_gaussian(sigma, Modulus(qv));
      double sum = 0.0;
      for (std::uint32_t x = 0; x < qv; ++x) sum += chi.pmf_at(x);
      CHECK(std::abs(sum - 1.0) < 1e-12);
      for (std::uint32_t x = 1; x < qv; ++x) {
        CHECK(chi.pmf_at(x) == doctest::Approx(chi.pmf_at(qv - x)).epsilon(1e-12));
        CHECK(chi.pmf_at(x) <= chi.pmf_at(0) + 1e-15);
      }
    }
  }
}

TEST_CASE("gaussian domain errors") {
  CHECK_THROWS_AS(make_gaussian(0.0, Modulus(7)), std::invalid_argument);
  CHECK_THROWS_AS(make_gaussian(-1.0, Modulus(7)), std::invalid_argument);
}

TEST_CASE("sample_error is reproducible and matches its pmf") {
  const auto chi = make_gaussian(1.0, Modulus(7));
  SUBCASE("same seed, same stream") {
    const auto a = sample_error(chi, {42}, 1000);
    const auto b = sample_error(chi, {42}, 1000);
    CHECK(a == b);
    const auto c = sample_error(chi, {43}, 1000);
    CHECK(a != c);
  }
  SUBCASE("point mass draws only zero") {
    const auto point = make_gaussian(1e-6, Modulus(7));
    for (auto v : sample_error(point, {7}, 10000)) CHECK(v == 0);
  }
  SUBCASE("chi-squared goodness of fit over 1e6 draws") {
    const auto draws = sample_error(chi, {123}, 1000000);
    std::vector<std::size_t> counts(7, 0);
    for (auto v : draws) ++counts[v];
    CHECK(testutil::chi_squared(counts, chi.pmf()) < kChi2Crit999Df6);
  }
}

TEST_CASE("fourier coefficients") {
  const auto chi = make_gaussian(1.0, Modulus(7));
  SUBCASE("normalization at y = 0") {
    const auto c = fourier_coefficient(chi, 0);
    CHECK(std::abs(c.real() - 1.0) < 1e-12);
    CHECK(std::abs(c.imag()) < 1e-12);
  }
  SUBCASE("uniform distribution is the indicator of y = 0") {
    const auto uniform = make_gaussian(1e6 * 5, Modulus(5));
    CHECK(std::abs(fourier_coefficient(uniform, 0).real() - 1.0) < 1e-12);
    for (std::uint32_t y = 1; y < 5; ++y)
      CHECK(std::abs(fourier_coefficient(uniform, y)) < 1e-12);
  }
  SUBCASE("golden value at y = 1") {
    const auto c = fourier_coefficient(chi, 1);
    CHECK(std::abs(c.real() - kGoldenFourierY1) < 1e-12);
    CHECK(std::abs(c.imag()) < 1e-12);
  }
  SUBCASE("negation symmetry makes every coefficient real") {
    for (double sigma : {0.4, 1.0, 2.5}) {
      for (std::uint32_t qv : {5u, 8u, 11u}) {
        const auto c2 = make_gaussian(sigma, Modulus(qv));
        for (std::uint32_t y = 0; y < qv; ++y) {
          const auto v = fourier_coefficient(c2, y);
          CHECK(std::abs(v.imag()) < 1e-12);
          CHECK(std::abs(v) <= 1.0 + 1e-12);
        }
      }
    }
  }
  SUBCASE("Parseval over Z_q") {
    for (double sigma : {0.3, 1.0, 4.0}) {
      const auto c2 = make_gaussian(sigma, Modulus(9));
      double lhs = 0.0, rhs = 0.0;
      for (std::uint32_t y = 0; y < 9; ++y) lhs += std::norm(fourier_coefficient(c2, y));
      for (std::uint32_t x = 0; x < 9; ++x) rhs += c2.pmf_at(x) * c2.pmf_at(x);
      CHECK(std::abs(lhs - 9.0 * rhs) < 1e-10);
    }
  }
  SUBCASE("y out of range") {
    CHECK_THROWS_AS(fourier_coefficient(chi, 7), std::invalid_argument);
  }
}

TEST_CASE("shannon entropy") {
  SUBCASE("point mass and uniform") {
    const std::vector<double> point = {1.0, 0.0, 0.0};
    CHECK(shannon_entropy(point, LogBase::two) == doctest::Approx(0.0).epsilon(1e-15));
    const std::vector<double> uniform8(8, 0.125);
    CHECK(shannon_entropy(uniform8, LogBase::two) == doctest::Approx(3.0).epsilon(1e-14));
    const std::vector<double> uniform7(7, 1.0 / 7);
    CHECK(shannon_entropy(uniform7, LogBase::e) ==
          doctest::Approx(std::log(7.0)).epsilon(1e-14));
  }
  SUBCASE("golden value for chi(sigma=1, q=7)") {
    const auto chi = make_gaussian(1.0, Modulus(7));
    CHECK(std::abs(shannon_entropy(chi.pmf(), LogBase::two) - kGoldenEntropyBits) < 1e-12);
    CHECK(std::abs(shannon_entropy(chi.pmf(), LogBase::e) - kGoldenEntropyNats) < 1e-12);
  }
  SUBCASE("domain errors") {
    const std::vector<double> negative = {1.1, -0.1};
    CHECK_THROWS_AS(shannon_entropy(negative, LogBase::two), std::invalid_argument);
    const std::vector<double> short_sum = {0.4, 0.4};
    CHECK_THROWS_AS(shannon_entropy(short_sum, LogBase::two), std::invalid_argument);
  }
  SUBCASE("0 <= H <= log q on random pmfs") {
    Rng rng(RandomSeed{5});
    for (int it = 0; it < 100; ++it) {
      std::vector<double> p(11);
      double sum = 0.0;
      for (auto& v : p) {
        v = rng.unit();
        sum += v;
      }
      for (auto& v : p) v /= sum;
      const double h = shannon_entropy(p, LogBase::two);
      CHECK(h >= 0.0);
      CHECK(h <= std::log2(11.0) + 1e-12);
    }
  }
}

TEST_CASE("inner product") {
  const Modulus q5(5);
  SUBCASE("hand arithmetic") {
    const ZqVector zero({0, 0}, q5), s({3, 4}, q5);
    CHECK(inner_product(zero, s) == 0);
    const ZqVector a({1, 2}, q5);
    CHECK(inner_product(a, s) == 1);  // (3 + 8) mod 5
  }
  SUBCASE("bilinearity over 1000 random triples") {
    Rng rng(RandomSeed{99});
    const Modulus q(13);
    for (int it = 0; it < 1000; ++it) {
      std::vector<std::uint32_t> av(4), sv(4), tv(4), sum(4);
      for (int i = 0; i < 4; ++i) {
        av[i] = rng.below(13);
        sv[i] = rng.below(13);
        tv[i] = rng.below(13);
        sum[i] = (sv[i] + tv[i]) % 13;
      }
      const ZqVector a(av, q), s(sv, q), t(tv, q), st(sum, q);
      CHECK(inner_product(a, st) == (inner_product(a, s) + inner_product(a, t)) % 13);
    }
  }
  SUBCASE("mismatch errors") {
    const ZqVector a({1, 2}, q5);
    CHECK_THROWS_AS(inner_product(a, ZqVector({1}, q5)), std::invalid_argument);
    CHECK_THROWS_AS(inner_product(a, ZqVector({1, 2}, Modulus(7))), std::invalid_argument);
  }
  SUBCASE("entries must be canonical") {
    CHECK_THROWS_AS(ZqVector({5, 0}, q5), std::invalid_argument);
    CHECK_THROWS_AS(ZqVector({}, q5), std::invalid_argument);
  }
}

TEST_CASE("gaussian JSON round-trip") {
  const auto chi = make_gaussian(0.75, Modulus(11));
  const auto back = DiscreteGaussian::from_json(chi.to_json());
  CHECK(back.sigma() == chi.sigma());
  CHECK(back.modulus().value() == 11);
  for (std::uint32_t x = 0; x < 11; ++x) CHECK(back.pmf_at(x) == chi.pmf_at(x));
}
