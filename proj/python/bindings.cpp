#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "streamsplit/adversary.hpp"
#include "streamsplit/bench.hpp"
#include "streamsplit/core.hpp"
#include "streamsplit/errors.hpp"
#include "streamsplit/oracle.hpp"
#include "streamsplit/sketch.hpp"
#include "streamsplit/splitter.hpp"

namespace py = pybind11;
namespace ss = streamsplit;

namespace {

// Exact values cross the boundary as fractions.Fraction.
py::object to_fraction(const ss::Rational& r) {
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(ss::to_fraction_string(r));
}

std::vector<ss::LabeledPoint> to_points(const py::iterable& items) {
  std::vector<ss::LabeledPoint> pts;
  for (const auto& item : items) {
    const auto pair = item.cast<std::pair<std::int64_t, std::int64_t>>();
    pts.push_back({pair.first, pair.second});
  }
  return pts;
}

ss::ProblemConfig make_config(std::uint64_t N, std::uint64_t M, double epsilon, std::uint64_t seed) {
  ss::ProblemConfig c;
  c.N = N;
  c.M = M;
  c.epsilon = epsilon;
  c.seed = seed;
  return c;
}

ss::SplitterOptions make_options(ss::SketchLayout layout) {
  ss::SplitterOptions o;
  o.layout = layout;
  return o;
}

ss::AggregatedStream aggregate(const py::iterable& points, std::uint64_t N, ss::LossKind kind) {
  const auto pts = to_points(points);
  return ss::AggregatedStream::from_points(pts, N, ss::label_mode_for(kind));
}

py::dict check_dict(const ss::CheckRecord& c) {
  py::dict d;
  d["name"] = c.name;
  d["relation"] = c.relation;
  d["lhs"] = to_fraction(c.lhs);
  d["rhs"] = to_fraction(c.rhs);
  d["j"] = c.j ? py::cast(*c.j) : py::none();
  d["pass"] = c.pass;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "One-pass approximate split selection over a labelled stream.";

  auto error = py::register_exception<ss::Error>(m, "Error");
  py::register_exception<ss::ConfigError>(m, "ConfigError", error);
  py::register_exception<ss::EmptyStreamError>(m, "EmptyStreamError", error);
  py::register_exception<ss::ValidationError>(m, "ValidationError", error);
  py::register_exception<ss::FormatError>(m, "FormatError", error);
  py::register_exception<ss::IoError>(m, "IoError", error);

  py::enum_<ss::SketchLayout>(m, "SketchLayout")
      .value("hashed", ss::SketchLayout::hashed)
      .value("adaptive", ss::SketchLayout::adaptive);

  py::enum_<ss::LossKind>(m, "LossKind")
      .value("mse", ss::LossKind::mse)
      .value("gini", ss::LossKind::gini)
      .value("misclassification", ss::LossKind::misclassification);

  py::enum_<ss::InstanceKind>(m, "InstanceKind")
      .value("regression", ss::InstanceKind::regression)
      .value("misclassification", ss::InstanceKind::misclassification)
      .value("gini", ss::InstanceKind::gini);

  py::class_<ss::DerivedParams>(m, "DerivedParams")
      .def_property_readonly("tau", [](const ss::DerivedParams& p) { return to_fraction(p.tau); })
      .def_property_readonly("beta", [](const ss::DerivedParams& p) { return to_fraction(p.beta); })
      .def_readonly("K", &ss::DerivedParams::K)
      .def_readonly("k", &ss::DerivedParams::k)
      .def_readonly("levels", &ss::DerivedParams::levels)
      .def_readonly("rows", &ss::DerivedParams::rows)
      .def_readonly("width", &ss::DerivedParams::width)
      .def("__repr__", [](const ss::DerivedParams& p) {
        std::ostringstream os;
        os << "DerivedParams(K=" << p.K << ", k=" << p.k << ", levels=" << p.levels << ", rows=" << p.rows
           << ", width=" << p.width << ")";
        return os.str();
      });

  m.def(
      "derive_params",
      [](std::uint64_t N, std::uint64_t M, double epsilon) { return ss::derive_params(make_config(N, M, epsilon, 0)); },
      py::arg("N"), py::arg("M"), py::arg("epsilon"));

  py::class_<ss::SplitResult>(m, "SplitResult")
      .def_property_readonly("j", [](const ss::SplitResult& r) { return r.j_hat.j; })
      .def_readonly("est_loss", &ss::SplitResult::est_loss)
      .def_readonly("m", &ss::SplitResult::m)
      .def_readonly("space_cells", &ss::SplitResult::space_cells)
      .def_readonly("candidate_count", &ss::SplitResult::candidate_count)
      .def("__repr__", [](const ss::SplitResult& r) {
        std::ostringstream os;
        os << "SplitResult(j=" << r.j_hat.j << ", est_loss=" << r.est_loss << ", m=" << r.m << ")";
        return os.str();
      });

  m.def(
      "run_regression",
      [](const py::iterable& points, std::uint64_t N, std::uint64_t M, double epsilon, std::uint64_t seed,
         ss::SketchLayout layout) {
        const auto pts = to_points(points);
        py::gil_scoped_release release;
        return ss::run_regression(pts, make_config(N, M, epsilon, seed), make_options(layout));
      },
      py::arg("points"), py::arg("N"), py::arg("M"), py::arg("epsilon"), py::arg("seed") = 0,
      py::arg("layout") = ss::SketchLayout::adaptive);

  m.def(
      "run_gini",
      [](const py::iterable& points, std::uint64_t N, double epsilon, std::uint64_t seed, ss::SketchLayout layout) {
        const auto pts = to_points(points);
        py::gil_scoped_release release;
        return ss::run_gini(pts, make_config(N, 1, epsilon, seed), make_options(layout));
      },
      py::arg("points"), py::arg("N"), py::arg("epsilon"), py::arg("seed") = 0,
      py::arg("layout") = ss::SketchLayout::adaptive);

  m.def(
      "exact_loss",
      [](const py::iterable& points, std::uint64_t N, ss::LossKind kind, std::uint64_t j) {
        return to_fraction(ss::exact_loss(aggregate(points, N, kind), kind, j));
      },
      py::arg("points"), py::arg("N"), py::arg("kind"), py::arg("j"));

  m.def(
      "exact_opt",
      [](const py::iterable& points, std::uint64_t N, ss::LossKind kind) {
        const auto opt = ss::exact_opt(aggregate(points, N, kind), kind);
        return py::make_tuple(opt.split.j, to_fraction(opt.loss));
      },
      py::arg("points"), py::arg("N"), py::arg("kind"), "Smallest minimizing split and its exact loss.");

  m.def(
      "exact_loss_curve",
      [](const py::iterable& points, std::uint64_t N, ss::LossKind kind) {
        py::list out;
        for (const auto& v : ss::exact_loss_curve(aggregate(points, N, kind), kind)) out.append(to_fraction(v));
        return out;
      },
      py::arg("points"), py::arg("N"), py::arg("kind"));

  py::class_<ss::HardInstance>(m, "HardInstance")
      .def_readonly("kind", &ss::HardInstance::kind)
      .def_readonly("n", &ss::HardInstance::n)
      .def_readonly("z", &ss::HardInstance::z)
      .def_readonly("i", &ss::HardInstance::i)
      .def_readonly("B", &ss::HardInstance::B)
      .def_readonly("T", &ss::HardInstance::T)
      .def_readonly("N", &ss::HardInstance::N)
      .def_readonly("m", &ss::HardInstance::m)
      .def_readonly("j_minus", &ss::HardInstance::j_minus)
      .def_readonly("j_plus", &ss::HardInstance::j_plus)
      .def_property_readonly("expected_minimizer", &ss::HardInstance::expected_minimizer)
      .def_property_readonly("stream", [](const ss::HardInstance& inst) {
        py::list out;
        for (const auto& p : inst.stream) out.append(py::make_tuple(p.x, p.y));
        return out;
      });

  m.def(
      "gen_instance",
      [](ss::InstanceKind kind, std::uint64_t n, const std::vector<std::uint8_t>& z, std::uint64_t i) {
        return ss::gen_instance(kind, n, z, i);
      },
      py::arg("kind"), py::arg("n"), py::arg("z"), py::arg("i"));

  m.def(
      "verify_instance",
      [](const ss::HardInstance& inst) {
        ss::VerificationReport report;
        {
          py::gil_scoped_release release;
          report = ss::verify_instance(inst);
        }
        py::list checks;
        for (const auto& c : report.checks) checks.append(check_dict(c));
        py::dict d;
        d["passed"] = report.passed();
        d["checks"] = checks;
        return d;
      },
      py::arg("instance"));

  py::class_<ss::DyadicCmSketch>(m, "DyadicCmSketch")
      .def(py::init<std::uint64_t, std::uint32_t, std::uint64_t, std::uint64_t, std::uint64_t, ss::SketchLayout>(),
           py::arg("N"), py::arg("rows"), py::arg("width"), py::arg("seed") = 0, py::arg("sketch_id") = 0,
           py::arg("layout") = ss::SketchLayout::adaptive)
      .def("update", &ss::DyadicCmSketch::update, py::arg("x"), py::arg("weight") = 1)
      .def("range_query", &ss::DyadicCmSketch::range_query, py::arg("lo"), py::arg("hi"))
      .def_property_readonly("total_weight", &ss::DyadicCmSketch::total_weight)
      .def_property_readonly("levels", &ss::DyadicCmSketch::levels)
      .def_property_readonly("rows", &ss::DyadicCmSketch::rows)
      .def_property_readonly("width", &ss::DyadicCmSketch::width)
      .def_property_readonly("counter_count", &ss::DyadicCmSketch::counter_count)
      .def("to_bytes",
           [](const ss::DyadicCmSketch& s) {
             std::ostringstream os;
             s.save(os);
             return py::bytes(os.str());
           })
      .def_static("from_bytes", [](const py::bytes& data) {
        std::istringstream is(std::string{data});
        return ss::DyadicCmSketch::load(is);
      });
}
