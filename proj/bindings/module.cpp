#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <vector>

#include "lwelab/gkp.hpp"
#include "lwelab/info_bounds.hpp"
#include "lwelab/lwe.hpp"
#include "lwelab/quantum.hpp"
#include "lwelab/ring.hpp"

namespace py = pybind11;
using namespace lwelab;

namespace {

DiscreteGaussian gaussian(double sigma, std::uint32_t q) {
  return make_gaussian(sigma, Modulus(q));
}

std::vector<std::uint32_t> secret_entries(const SecretKey& key) {
  return key.s.entries();
}

DensityMatrix density_from_rows(
    const std::vector<std::vector<std::complex<double>>>& rows) {
  const Eigen::Index d = Eigen::Index(rows.size());
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (Eigen::Index(rows[i].size()) != d)
      throw std::invalid_argument("density matrix rows must be square");
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rows[i][j];
  }
  return DensityMatrix(std::move(m));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact desk-scale LWE laboratory: instance generation, statevector "
            "QFT attacks, information bounds and lattice displacement decoding.";

  py::class_<DiscreteGaussian>(m, "DiscreteGaussian")
      .def_property_readonly("sigma", &DiscreteGaussian::sigma)
      .def_property_readonly("q",
                             [](const DiscreteGaussian& chi) { return chi.modulus().value(); })
      .def_property_readonly("pmf", &DiscreteGaussian::pmf)
      .def("to_json", &DiscreteGaussian::to_json);

  py::class_<SecretKey>(m, "SecretKey")
      .def_property_readonly("entries", &secret_entries)
      .def("__eq__", [](const SecretKey& a, const SecretKey& b) { return a == b; });

  py::class_<InstanceSet>(m, "InstanceSet")
      .def_property_readonly("size", &InstanceSet::size)
      .def("to_json", &InstanceSet::to_json)
      .def_static("from_json", &InstanceSet::from_json)
      .def("sample",
           [](const InstanceSet& set, std::size_t i) {
             const auto& s = set.samples().at(i);
             return py::make_tuple(s.a.entries(), s.b);
           });

  py::class_<AttackReport>(m, "AttackReport")
      .def_property_readonly("recovered",
                             [](const AttackReport& r) { return r.recovered; })
      .def_readonly("samples_consumed", &AttackReport::samples_consumed)
      .def_property_readonly("trial_ys", [](const AttackReport& r) {
        std::vector<std::uint32_t> ys;
        for (const auto& t : r.per_trial_log) ys.push_back(t.measured_y);
        return ys;
      });

  py::class_<DensityMatrix>(m, "DensityMatrix").def(py::init(&density_from_rows));

  m.def("make_gaussian", &gaussian, py::arg("sigma"), py::arg("q"));
  m.def(
      "sample_error",
      [](const DiscreteGaussian& chi, std::uint64_t seed, std::size_t count) {
        return sample_error(chi, RandomSeed{seed}, count);
      },
      py::arg("chi"), py::arg("seed"), py::arg("count"));
  m.def(
      "fourier_coefficient",
      [](const DiscreteGaussian& chi, std::uint32_t y) {
        return fourier_coefficient(chi, y);
      },
      py::arg("chi"), py::arg("y"));
  m.def(
      "shannon_entropy",
      [](const std::vector<double>& pmf, const std::string& base) {
        return shannon_entropy(pmf, base == "e" ? LogBase::e : LogBase::two);
      },
      py::arg("pmf"), py::arg("base") = "2");

  m.def(
      "gen_secret",
      [](std::uint32_t n, std::uint32_t q, std::uint64_t seed) {
        return gen_secret(n, Modulus(q), RandomSeed{seed});
      },
      py::arg("n"), py::arg("q"), py::arg("seed"));
  m.def(
      "sample_lwe",
      [](const SecretKey& key, const DiscreteGaussian& chi, std::size_t m,
         std::uint64_t seed) { return sample_lwe(key, chi, m, RandomSeed{seed}); },
      py::arg("key"), py::arg("chi"), py::arg("m"), py::arg("seed"));
  m.def(
      "sample_uniform",
      [](std::uint32_t n, std::uint32_t q, std::size_t m, std::uint64_t seed) {
        return sample_uniform(n, Modulus(q), m, RandomSeed{seed});
      },
      py::arg("n"), py::arg("q"), py::arg("m"), py::arg("seed"));
  m.def("solve_noiseless", [](const InstanceSet& set) {
    const auto result = solve_noiseless(set);
    const char* status = result.status == SolveStatus::ok
                             ? "ok"
                             : result.status == SolveStatus::insufficient_rank
                                   ? "insufficient_rank"
                                   : "verify_fail";
    return py::make_tuple(status, result.key);
  });
  m.def("brute_force_search", &brute_force_search, py::arg("samples"), py::arg("chi"));
  m.def("decision_statistical_distance", &decision_statistical_distance, py::arg("chi"));

  m.def(
      "predicted_success_probability",
      [](const DiscreteGaussian& chi, std::uint32_t n, std::uint32_t y) {
        return predicted_success_probability(chi, n, y);
      },
      py::arg("chi"), py::arg("n"), py::arg("y"));
  m.def(
      "gkz_attack",
      [](const SecretKey& key, const DiscreteGaussian& chi, std::size_t max_samples,
         std::size_t confirm, std::uint64_t seed) {
        return gkz_attack(key, chi, max_samples, confirm, RandomSeed{seed});
      },
      py::arg("key"), py::arg("chi"), py::arg("max_samples"), py::arg("confirm"),
      py::arg("seed"));

  m.def("binary_entropy", &binary_entropy, py::arg("p"));
  m.def("fano_bound", &fano_bound, py::arg("p_e"), py::arg("secret_space_size"));
  m.def(
      "exact_conditional_entropy",
      [](std::uint32_t n, std::uint32_t q, const DiscreteGaussian& chi, std::uint32_t m) {
        const auto r = exact_conditional_entropy(n, Modulus(q), chi, m);
        return py::make_tuple(r.h_bits, r.map_error);
      },
      py::arg("n"), py::arg("q"), py::arg("chi"), py::arg("m"));
  m.def(
      "additive_channel_capacity",
      [](const DiscreteGaussian& chi) {
        const auto r = additive_channel_capacity(chi);
        return py::make_tuple(r.closed_form_bits, r.iterative_bits, r.iterations);
      },
      py::arg("chi"));
  m.def("von_neumann_entropy", &von_neumann_entropy, py::arg("rho"));
  m.def("trace_distance", &trace_distance, py::arg("rho"), py::arg("sigma"));
  m.def(
      "fannes_audenaert_check",
      [](const DensityMatrix& rho, const DensityMatrix& sigma) {
        const auto r = fannes_audenaert_check(rho, sigma);
        py::dict d;
        d["quantity_name"] = r.quantity_name;
        d["computed_value"] = r.computed_value;
        d["bound_value"] = r.bound_value;
        d["satisfied"] = r.satisfied;
        d["slack"] = r.slack;
        return d;
      },
      py::arg("rho"), py::arg("sigma"));
  m.def(
      "lwe_state_pair_trace_distance",
      [](std::uint32_t n, std::uint32_t q, const DiscreteGaussian& chi) {
        const auto pair = lwe_state_pair(n, Modulus(q), chi);
        return trace_distance(pair.ideal, pair.noisy);
      },
      py::arg("n"), py::arg("q"), py::arg("chi"));

  m.def(
      "decode_displacement",
      [](std::uint32_t q, double radius, std::uint32_t value) {
        const auto r = decode_displacement(LatticeCode(Modulus(q), radius), value);
        return py::make_tuple(!r.logical_error, r.syndrome.residual);
      },
      py::arg("q"), py::arg("radius"), py::arg("value"));
  m.def(
      "logical_error_probability",
      [](std::uint32_t q, double radius, const DiscreteGaussian& chi) {
        return logical_error_probability(LatticeCode(Modulus(q), radius), chi);
      },
      py::arg("q"), py::arg("radius"), py::arg("chi"));
  m.def(
      "concatenated_error_rate",
      [](std::uint32_t q, double radius, const DiscreteGaussian& chi, std::uint32_t m) {
        return concatenated_error_rate(LatticeCode(Modulus(q), radius), chi, m);
      },
      py::arg("q"), py::arg("radius"), py::arg("chi"), py::arg("m"));
  m.def(
      "key_confirmation",
      [](const InstanceSet& samples, const SecretKey& candidate, std::uint32_t q,
         double radius, double min_fraction) {
        return key_confirmation(samples, candidate, LatticeCode(Modulus(q), radius),
                                min_fraction) == Confirmation::accept;
      },
      py::arg("samples"), py::arg("candidate"), py::arg("q"), py::arg("radius"),
      py::arg("min_fraction") = 0.9);

#ifdef LWELAB_VERSION
  m.attr("__version__") = LWELAB_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
