#include "pcula/cli.hpp"
#include "pcula/config.hpp"
#include "pcula/domain.hpp"
#include "pcula/errors.hpp"
#include "pcula/experiments.hpp"
#include "pcula/metrics.hpp"
#include "pcula/potential.hpp"
#include "pcula/rng.hpp"
#include "pcula/sampler.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pcula;

namespace {

// Reports cross the boundary as JSON text; the Python side decodes them.
std::string report_json(const ExperimentReport& r) { return r.to_json().dump(); }

}  // namespace

PYBIND11_MODULE(_pcula, m) {
  m.doc() = "Penalized constrained Langevin sampling";

  auto base_error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base_error.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", base_error.ptr());
  py::register_exception<ProjectionNotConverged>(m, "ProjectionNotConverged", base_error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base_error.ptr());

  py::class_<ProjectionResult>(m, "ProjectionResult")
      .def_readonly("point", &ProjectionResult::point)
      .def_readonly("squared_distance", &ProjectionResult::squared_distance)
      .def_readonly("converged", &ProjectionResult::converged)
      .def_readonly("iterations", &ProjectionResult::iterations)
      .def_readonly("warning", &ProjectionResult::warning);

  py::class_<ConvexDomain>(m, "ConvexDomain")
      .def_static("ball", &ConvexDomain::ball, py::arg("center"), py::arg("radius"))
      .def_static("box", &ConvexDomain::box, py::arg("lower"), py::arg("upper"))
      .def_static("halfspace", &ConvexDomain::halfspace, py::arg("normal"), py::arg("offset"))
      .def_static("ellipsoid", py::overload_cast<Point, Point>(&ConvexDomain::ellipsoid),
                  py::arg("semi_axes"), py::arg("center"))
      .def_static("ellipsoid", py::overload_cast<Point>(&ConvexDomain::ellipsoid),
                  py::arg("semi_axes"))
      .def_static("intersection", &ConvexDomain::intersection, py::arg("parts"))
      .def_property_readonly("dimension", &ConvexDomain::dimension)
      .def_property_readonly("kind", &ConvexDomain::kind)
      .def("contains", &ConvexDomain::contains, py::arg("x"), py::arg("tol") = 0.0)
      .def("project", &ConvexDomain::project, py::arg("x"))
      .def("squared_distance", &ConvexDomain::squared_distance, py::arg("x"))
      .def("penalty_gradient", &ConvexDomain::penalty_gradient, py::arg("x"))
      .def(py::self == py::self);

  py::class_<Potential>(m, "Potential")
      .def_static("quadratic", &Potential::quadratic, py::arg("alpha"))
      .def_static("gaussian_centered", &Potential::gaussian_centered, py::arg("precision"))
      .def_static("custom", &Potential::custom, py::arg("value"), py::arg("gradient"),
                  py::arg("m"), py::arg("lipschitz"), py::arg("label") = "custom")
      .def("value", &Potential::value)
      .def("gradient", &Potential::gradient)
      .def_property_readonly("strong_convexity", &Potential::strong_convexity)
      .def_property_readonly("lipschitz", &Potential::lipschitz);

  py::class_<PenalizedPotential>(m, "PenalizedPotential")
      .def(py::init<Potential, ConvexDomain, double, bool>(), py::arg("base"), py::arg("domain"),
           py::arg("n"), py::arg("strict") = false)
      .def("value", &PenalizedPotential::value)
      .def("gradient", &PenalizedPotential::gradient)
      .def("constants",
           [](const PenalizedPotential& p) {
             const auto c = p.constants();
             return py::make_tuple(c.m, c.lipschitz);
           })
      .def_property_readonly("penalty", &PenalizedPotential::penalty);

  py::class_<NormalStream>(m, "NormalStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream") = 0)
      .def("next", &NormalStream::next)
      .def("at", &NormalStream::at, py::arg("index"));

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("samples", &Trajectory::samples)
      .def_readonly("first_step", &Trajectory::first_step)
      .def_readonly("thin", &Trajectory::thin)
      .def_property_readonly("final_position",
                             [](const Trajectory& t) { return t.final_state.position; });

  m.def(
      "run_chain",
      [](const PenalizedPotential& f, double h, std::uint64_t steps, std::uint64_t seed,
         double sigma, std::uint64_t stream, std::optional<Point> initial,
         std::optional<std::uint64_t> burn_in, std::uint64_t thin) {
        ChainConfig cfg{f};
        cfg.h = h;
        cfg.steps = steps;
        cfg.seed = seed;
        cfg.sigma = sigma;
        cfg.stream = stream;
        cfg.initial = std::move(initial);
        cfg.burn_in = burn_in;
        cfg.thin = thin;
        py::gil_scoped_release release;
        return run_chain(cfg);
      },
      py::arg("potential"), py::arg("h"), py::arg("steps"), py::arg("seed"),
      py::arg("sigma") = 1.0, py::arg("stream") = 0, py::arg("initial") = std::nullopt,
      py::arg("burn_in") = std::nullopt, py::arg("thin") = 1);

  m.def(
      "w2_1d",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return w2_exact_1d(EmpiricalMeasure::from_values(a), EmpiricalMeasure::from_values(b));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "w2_assignment",
      [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        // rows are points on the Python side
        return w2_exact_assignment(EmpiricalMeasure(a.transpose()),
                                   EmpiricalMeasure(b.transpose()));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "accuracy_in_domain",
      [](const Eigen::MatrixXd& samples, const ConvexDomain& d) {
        return accuracy_in_domain(Eigen::MatrixXd(samples.transpose()), d);
      },
      py::arg("samples"), py::arg("domain"));

  m.def(
      "fig2",
      [](std::vector<double> n_list, std::vector<std::uint64_t> seeds, std::uint64_t steps,
         double h, double alpha, unsigned threads) {
        Fig2Params p;
        p.n_list = std::move(n_list);
        p.seeds = std::move(seeds);
        p.steps = steps;
        p.h = h;
        p.alpha = alpha;
        py::gil_scoped_release release;
        return report_json(fig2_reproduction(p, {threads}));
      },
      py::arg("n_list") = std::vector<double>{1, 10, 100, 500},
      py::arg("seeds") = std::vector<std::uint64_t>{1, 2, 3, 4, 5}, py::arg("steps") = 100000,
      py::arg("h") = 1e-4, py::arg("alpha") = 1.0, py::arg("threads") = 0);

  m.def(
      "penalty_sweep_quadrature",
      [](const Potential& g, const ConvexDomain& d, std::vector<double> n_list, double dx) {
        QuadratureSweepParams p{g, d};
        p.n_list = std::move(n_list);
        p.dx = dx;
        py::gil_scoped_release release;
        return report_json(penalty_sweep_quadrature(p));
      },
      py::arg("base"), py::arg("domain"), py::arg("n_list"), py::arg("dx") = 1e-4);

  m.def(
      "run_config",
      [](const std::string& text, unsigned threads) {
        const auto cfg = parse_config(text);
        std::string report;
        {
          py::gil_scoped_release release;
          report = report_json(execute(cfg, threads).report);
        }
        return py::make_tuple(report, config_echo(cfg));
      },
      py::arg("text"), py::arg("threads") = 0,
      "Run a configuration document; returns (report JSON, config echo).");
}
