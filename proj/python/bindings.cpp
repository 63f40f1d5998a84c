#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ellipticity/check.hpp"
#include "ellipticity/errors.hpp"
#include "ellipticity/generators.hpp"
#include "ellipticity/io.hpp"
#include "ellipticity/oracle.hpp"
#include "ellipticity/spectral.hpp"

namespace py = pybind11;
using namespace ellipticity;

namespace {

py::object to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null: return py::none();
    case json::value_t::boolean: return py::bool_(j.get<bool>());
    case json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case json::value_t::number_float: return py::float_(j.get<double>());
    case json::value_t::string: return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list l;
      for (const auto& e : j) l.append(to_py(e));
      return std::move(l);
    }
    case json::value_t::object: {
      py::dict d;
      for (auto it = j.begin(); it != j.end(); ++it) d[py::str(it.key())] = to_py(it.value());
      return std::move(d);
    }
    default: return py::none();
  }
}

RawTensor raw_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> arr) {
  if (arr.ndim() != 4 || arr.shape(0) != 3 || arr.shape(1) != 3 || arr.shape(2) != 3 || arr.shape(3) != 3)
    throw py::value_error("expected an array of shape (3, 3, 3, 3)");
  RawTensor raw;
  std::copy(arr.data(), arr.data() + 81, raw.begin());
  return raw;
}

py::array_t<double> array_from_raw(const RawTensor& raw) {
  py::array_t<double> out({3, 3, 3, 3});
  std::copy(raw.begin(), raw.end(), out.mutable_data());
  return out;
}

StructuredDecomposition decomp_from_terms(const std::vector<std::pair<double, Mat3>>& terms) {
  StructuredDecomposition dec;
  for (const auto& [alpha, u] : terms) dec.terms.push_back({alpha, u});
  dec.order_positives_first();
  return dec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Strong ellipticity certification for 3x3x3x3 elasticity tensors";

  static py::exception<Error> base(m, "EllipticityError", PyExc_ValueError);
  py::register_exception<SymmetryViolation>(m, "SymmetryViolation", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<CaseMismatch>(m, "CaseMismatch", base.ptr());
  py::register_exception<InvalidEpsilon>(m, "InvalidEpsilon", base.ptr());

  py::class_<Elast4>(m, "Elast4")
      .def(py::init([](py::array_t<double> arr, double tol) { return Elast4::from_raw(raw_from_array(arr), tol); }),
           py::arg("entries"), py::arg("tol") = 1e-9)
      .def_static("symmetrized", [](py::array_t<double> arr) { return Elast4::symmetrized(raw_from_array(arr)); })
      .def("array", [](const Elast4& a) { return array_from_raw(a.entries()); })
      .def("norm", &Elast4::norm)
      .def("__call__", [](const Elast4& a, int i, int j, int k, int l) { return a(i, j, k, l); })
      .def("__eq__", [](const Elast4& a, const Elast4& b) { return a == b; });

  m.def("tensor_E", &tensor_E);
  m.def("tensor_choi_lam", &tensor_choi_lam, py::arg("gamma") = 1.0);
  m.def("tensor_isotropic", &tensor_isotropic, py::arg("lam"), py::arg("mu"));
  m.def("tensor_mpsd_not_spsd", &tensor_mpsd_not_spsd);
  m.def(
      "random_spd_tensor", [](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        return random_spd_tensor(rng);
      },
      py::arg("seed") = 0);

  m.def("biquadratic", py::overload_cast<const Elast4&, const Vec3&, const Vec3&>(&biquadratic));
  m.def("contract_yy", py::overload_cast<const Elast4&, const Vec3&>(&contract_yy));
  m.def("unfold", py::overload_cast<const Elast4&>(&unfold));
  m.def("min_eigenvalue", [](const Elast4& a) { return min_eigenvalue<9>(unfold(a)); });
  m.def("is_spsd", &is_spsd, py::arg("a"), py::arg("tol") = 1e-12);
  m.def("is_spd", &is_spd, py::arg("a"), py::arg("tol") = 1e-12);

  m.def(
      "run_pocs",
      [](const Elast4& a, int max_iter, double tol, double epsilon) {
        PocsOptions o;
        o.max_iter = max_iter;
        o.tol_converge = tol;
        o.epsilon_shift = epsilon;
        return to_py(to_json(run_pocs(a, o)));
      },
      py::arg("a"), py::arg("max_iter") = 20000, py::arg("tol") = 1e-10, py::arg("epsilon") = 0.0);
  m.def(
      "certify_mpsd", [](const Elast4& a) { return to_py(to_json(certify_mpsd(a))); }, py::arg("a"));
  m.def(
      "certify_mpd",
      [](const Elast4& a, double epsilon, bool sweep) {
        PocsOptions o;
        o.epsilon_shift = epsilon;
        return to_py(to_json(certify_mpd(a, o, sweep)));
      },
      py::arg("a"), py::arg("epsilon") = kDefaultMpdEpsilon, py::arg("sweep") = false);

  m.def(
      "oracle",
      [](const Elast4& a, int grid_n, double tol) { return to_py(to_json(oracle_verdict(a, grid_n, tol))); },
      py::arg("a"), py::arg("grid_n") = 2000, py::arg("tol") = 1e-8);

  m.def(
      "check_case",
      [](int case_id, const std::vector<std::pair<double, Mat3>>& terms, double tol) {
        CaseOptions o;
        o.tol = tol;
        const auto dec = decomp_from_terms(terms);
        if (case_id == 1) return to_py(to_json(check_case1(dec, o)));
        if (case_id == 2) return to_py(to_json(check_case2(dec, o)));
        if (case_id == 3) return to_py(to_json(check_case3(dec, o)));
        throw py::value_error("case_id must be 1, 2 or 3");
      },
      py::arg("case_id"), py::arg("terms"), py::arg("tol") = 1e-8,
      "terms: list of (alpha, U) with U a 3x3 array");

  m.def(
      "check",
      [](const Elast4& a, std::optional<std::vector<std::pair<double, Mat3>>> terms, int grid_n) {
        CheckConfig cfg;
        cfg.grid_n = grid_n;
        if (terms) cfg.decomp = decomp_from_terms(*terms);
        return to_py(to_json(run_check(a, cfg)));
      },
      py::arg("a"), py::arg("terms") = py::none(), py::arg("grid_n") = 2000);

  m.def("load_tensor", [](const std::string& path) { return elast4_from_json(read_json_file(path)); });
  m.def("save_tensor", [](const Elast4& a, const std::string& path, const std::string& name) {
    write_json_file(path, to_json(a, name));
  }, py::arg("a"), py::arg("path"), py::arg("name") = "");
}
