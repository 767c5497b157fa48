#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vnls/conservation.hpp"
#include "vnls/mirror_builder.hpp"
#include "vnls/soliton_engine.hpp"
#include "vnls/verification.hpp"

namespace py = pybind11;
using namespace vnls;

namespace {

// Norming constants travel as a (J, n) complex array.
SpectralData make_data(const std::vector<Complex>& poles, const ComplexMatrix& norming, int lambda) {
  if (static_cast<std::size_t>(norming.rows()) != poles.size()) {
    throw Error(ErrorKind::InvalidInput, "norming needs one row per pole");
  }
  SpectralData d;
  d.lambda = lambda;
  d.n = static_cast<int>(norming.cols());
  d.poles = poles;
  for (Eigen::Index j = 0; j < norming.rows(); ++j) d.norming.push_back(norming.row(j));
  return d;
}

ComplexMatrix stack(const std::vector<ComplexRow>& rows, int n) {
  ComplexMatrix m(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t j = 0; j < rows.size(); ++j) m.row(static_cast<Eigen::Index>(j)) = rows[j];
  return m;
}

py::dict summary_dict(const ReflectionSummary& s) {
  py::dict d;
  d["incoming_amplitudes"] = s.incoming_amplitudes;
  d["outgoing_amplitudes"] = s.outgoing_amplitudes;
  d["incoming_total"] = s.incoming_total;
  d["outgoing_total"] = s.outgoing_total;
  d["incoming_x"] = s.incoming_x;
  d["outgoing_x"] = s.outgoing_x;
  d["times"] = py::make_tuple(s.measurement_times.first, s.measurement_times.second);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Soliton solutions of the focusing vector NLS equation on the half line";
  m.attr("__version__") = VNLS_VERSION;

  static py::exception<Error> error_type(m, "VnlsError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<BoundarySpec>(m, "Boundary")
      .def_static("robin", &BoundarySpec::robin, py::arg("alpha"))
      .def_static("mixed", &BoundarySpec::mixed, py::arg("signs"))
      .def_static(
          "rotated",
          [](std::vector<int> signs, double theta, double zeta, double xi) {
            return BoundarySpec::rotated(std::move(signs), {theta, zeta, xi});
          },
          py::arg("signs") = std::vector<int>{1, -1}, py::arg("theta") = 0.0, py::arg("zeta") = 0.0, py::arg("xi") = 0.0)
      .def_property_readonly("kind",
                             [](const BoundarySpec& b) {
                               switch (b.kind) {
                                 case BoundaryKind::Robin: return "robin";
                                 case BoundaryKind::MixedND: return "mixed";
                                 case BoundaryKind::Rotated: return "rotated";
                               }
                               return "unknown";
                             })
      .def("matrix", [](const BoundarySpec& b, Complex k, int n) { return boundary_matrix(b, k, n); },
           py::arg("k"), py::arg("n"));

  m.def("unitary_from_angles", &unitary_from_angles, py::arg("theta"), py::arg("zeta"), py::arg("xi"));

  m.def(
      "mirror_norming_constant",
      [](Complex k, const ComplexRow& c, const BoundarySpec& bc) -> ComplexRow { return mirror_norming_constant(k, c, bc); },
      py::arg("k"), py::arg("c"), py::arg("boundary"));

  m.def(
      "verify_constraints",
      [](Complex k, const ComplexRow& c, const ComplexRow& cp, const BoundarySpec& bc) {
        const ConstraintResidual r = verify_constraints(k, c, cp, bc);
        return py::make_tuple(r.direct, r.mirror);
      },
      py::arg("k"), py::arg("c"), py::arg("c_mirror"), py::arg("boundary"),
      "Residuals of the two norming-constant constraints.");

  m.def(
      "assemble_halfline",
      [](const std::vector<Complex>& poles, const ComplexMatrix& norming, const BoundarySpec& bc,
         std::optional<ComplexMatrix> mirror) {
        const SpectralData base = make_data(poles, norming, -1);
        std::optional<std::vector<ComplexRow>> supplied;
        if (mirror) supplied = make_data(poles, *mirror, -1).norming;
        const HalfLineProblem p = assemble_halfline(base, bc, supplied);
        py::dict d;
        d["poles"] = p.assembled.poles;
        d["norming"] = stack(p.assembled.norming, p.n());
        d["mirror_norming"] = stack(p.mirror_norming, p.n());
        std::vector<double> worst;
        for (const auto& r : p.residuals) worst.push_back(r.worst());
        d["residuals"] = worst;
        return d;
      },
      py::arg("poles"), py::arg("norming"), py::arg("boundary"), py::arg("mirror_norming") = py::none(),
      "Full-line data (k_j, C_j), (-conj k_j, C_j') for a half-line problem.");

  m.def(
      "reconstruct_field",
      [](double x, double t, const std::vector<Complex>& poles, const ComplexMatrix& norming, int lambda) -> ComplexVector {
        return reconstruct_field(x, t, make_data(poles, norming, lambda));
      },
      py::arg("x"), py::arg("t"), py::arg("poles"), py::arg("norming"), py::arg("lambda_") = -1);

  m.def(
      "field_grid",
      [](const std::vector<Complex>& poles, const ComplexMatrix& norming, std::pair<double, double> x_range, int n_x,
         std::pair<double, double> t_range, int n_t, unsigned threads) {
        const SpectralData d = make_data(poles, norming, -1);
        FieldGrid g;
        {
          py::gil_scoped_release release;
          g = field_grid(d, {{x_range.first, x_range.second, n_x}, {t_range.first, t_range.second, n_t}}, {}, threads);
        }
        py::array_t<Complex> out({n_t, n_x, d.n});
        auto v = out.mutable_unchecked<3>();
        for (int it = 0; it < n_t; ++it)
          for (int ix = 0; ix < n_x; ++ix)
            for (int j = 0; j < d.n; ++j) v(it, ix, j) = g.at(it, ix).R(j);
        return out;
      },
      py::arg("poles"), py::arg("norming"), py::arg("x_range"), py::arg("n_x"), py::arg("t_range"), py::arg("n_t"),
      py::arg("threads") = 0, "R sampled on a grid, shape (n_t, n_x, n).");

  m.def(
      "peak_scan",
      [](const std::vector<Complex>& poles, const ComplexMatrix& norming, double t, double x_lo, double x_hi) {
        const PeakReport r = peak_scan(make_data(poles, norming, -1), t, x_lo, x_hi);
        return py::make_tuple(r.x_peak ? py::cast(*r.x_peak) : py::none(), r.amplitudes, r.total);
      },
      py::arg("poles"), py::arg("norming"), py::arg("t"), py::arg("x_lo"), py::arg("x_hi"),
      "(x_peak, amplitudes, total) of sum |R_j|^2 at fixed t.");

  m.def(
      "reflection_summary",
      [](Complex k, const ComplexRow& c, const BoundarySpec& bc, std::optional<double> horizon) {
        ReflectionOptions opts;
        opts.horizon = horizon;
        return summary_dict(reflection_summary(assemble_halfline({-1, static_cast<int>(c.size()), {k}, {c}}, bc), opts));
      },
      py::arg("k"), py::arg("c"), py::arg("boundary"), py::arg("horizon") = py::none());

  m.def(
      "charges_over_time",
      [](const std::vector<Complex>& poles, const ComplexMatrix& norming, const BoundarySpec& bc,
         const std::vector<double>& times, const std::vector<int>& orders, int n_x) {
        ChargeGrid g;
        g.n_x = n_x;
        const ChargeSeries s = charges_over_time(assemble_halfline(make_data(poles, norming, -1), bc), times, orders, g);
        py::dict d;
        d["values"] = s.values;
        d["relative_drift"] = s.relative_drift;
        d["x_max"] = s.x_max;
        return d;
      },
      py::arg("poles"), py::arg("norming"), py::arg("boundary"), py::arg("times"), py::arg("orders") = std::vector<int>{1, 2, 3},
      py::arg("n_x") = 2000);
}
