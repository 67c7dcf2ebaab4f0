#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cmlax/cli.hpp"
#include "cmlax/errors.hpp"
#include "cmlax/flows.hpp"
#include "cmlax/io.hpp"
#include "cmlax/lax.hpp"

namespace py = pybind11;
using namespace cmlax;
using namespace pybind11::literals;

namespace
{

py::tuple run_command(const std::string &name, const std::string &config, const std::optional<std::string> &out,
                      const std::optional<std::string> &format, const std::string &to)
{
  cli::RunOptions options;
  options.out = out;
  options.format = format;
  std::ostringstream o, e;
  int code;
  {
    py::gil_scoped_release release;
    if (name == "simulate")
    {
      code = cli::cmd_simulate(config, options, o, e);
    }
    else if (name == "convert")
    {
      code = cli::cmd_convert(config, to, options, o, e);
    }
    else if (name == "invariants")
    {
      code = cli::cmd_invariants(config, options, o, e);
    }
    else
    {
      throw ConfigError("unknown command '" + name + "'");
    }
  }
  return py::make_tuple(code, o.str(), e.str());
}

}  // namespace

PYBIND11_MODULE(_cmlax, m)
{
  m.doc() = "Calogero-Moser systems: special functions, Lax matrices, Hamiltonians and flows.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<PoleError>(m, "PoleError", base.ptr());
  py::register_exception<CollisionError>(m, "CollisionError", base.ptr());
  py::register_exception<SingularMatrixError>(m, "SingularMatrixError", base.ptr());
  py::register_exception<ConstraintError>(m, "ConstraintError", base.ptr());
  py::register_exception<QuadratureError>(m, "QuadratureError", base.ptr());
  py::register_exception<StepError>(m, "StepError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::enum_<Variant>(m, "Variant")
    .value("Rational", Variant::Rational)
    .value("Trigonometric", Variant::Trigonometric)
    .value("Elliptic", Variant::Elliptic);
  py::enum_<TrigConvention>(m, "TrigConvention")
    .value("Literal", TrigConvention::Literal)
    .value("Cotangent", TrigConvention::Cotangent);

  py::class_<Lattice>(m, "Lattice")
    .def(py::init<Complex, int, double>(), "tau"_a, "truncation_radius"_a = Lattice::kDefaultTruncation,
         "tolerance"_a = Lattice::kDefaultTolerance)
    .def_property_readonly("tau", &Lattice::tau)
    .def_property_readonly("g2", &Lattice::g2)
    .def_property_readonly("g3", &Lattice::g3)
    .def_property_readonly("discriminant", &Lattice::discriminant);

  py::class_<Curve>(m, "Curve")
    .def_static("rational", &Curve::rational)
    .def_static("trigonometric", &Curve::trigonometric, "zeta"_a = TrigConvention::Literal,
                "kernel"_a = TrigConvention::Cotangent)
    .def_static("elliptic", [](Complex tau) { return Curve::elliptic(Lattice(tau)); }, "tau"_a)
    .def_readonly("variant", &Curve::variant)
    .def_property_readonly("lattice", [](const Curve &c) { return c.lattice; })
    .def("distance_to_singular", &Curve::distance_to_singular);

  py::class_<QuiverDatum>(m, "QuiverDatum")
    .def(py::init([](const Curve &c, CMatrix X, CMatrix Y, CMatrix u, CMatrix v)
                  {
                    QuiverDatum d{c, std::move(X), std::move(Y), std::move(u), std::move(v)};
                    d.validate();
                    return d;
                  }),
         "curve"_a, "X"_a, "Y"_a, "u"_a, "v"_a)
    .def_readonly("curve", &QuiverDatum::curve)
    .def_readonly("X", &QuiverDatum::X)
    .def_readonly("Y", &QuiverDatum::Y)
    .def_readonly("u", &QuiverDatum::u)
    .def_readonly("v", &QuiverDatum::v)
    .def_property_readonly("n", &QuiverDatum::n)
    .def_property_readonly("k", &QuiverDatum::k);

  py::class_<ParticleState>(m, "ParticleState")
    .def(py::init([](const Curve &c, CVector q, CVector p, CMatrix a, CMatrix b)
                  {
                    ParticleState s{c, std::move(q), std::move(p), std::move(a), std::move(b)};
                    s.validate();
                    return s;
                  }),
         "curve"_a, "q"_a, "p"_a, "a"_a, "b"_a)
    .def_readonly("curve", &ParticleState::curve)
    .def_readonly("q", &ParticleState::q)
    .def_readonly("p", &ParticleState::p)
    .def_readonly("a", &ParticleState::a)
    .def_readonly("b", &ParticleState::b)
    .def_property_readonly("n", &ParticleState::n)
    .def_property_readonly("k", &ParticleState::k)
    .def("contractions", &ParticleState::contractions);

  m.def("wp", &specfun::wp, "z"_a, "lattice"_a);
  m.def("wp_prime", &specfun::wp_prime, "z"_a, "lattice"_a);
  m.def("sigma_w", &specfun::sigma_w, "z"_a, "lattice"_a);
  m.def("zeta_w", &specfun::zeta_w, "z"_a, "curve"_a);
  m.def("potential", &specfun::potential, "q"_a, "curve"_a);
  m.def("lax_kernel", &specfun::lax_kernel, "q"_a, "z"_a, "curve"_a);

  m.def("moment_map", &phase::moment_map);
  m.def("constraint_residual", [](const QuiverDatum &d) { return phase::check_constraint(d, 0.0).residual; });
  m.def("gauge_transform", [](const QuiverDatum &d, const CMatrix &g)
        { return phase::gauge_transform(d, GaugeElement(g)); });
  m.def("normalize_spins", [](const ParticleState &s) { return phase::normalize_spins(s); });
  m.def("from_particles", [](const ParticleState &s) { return phase::from_particles(s); });
  m.def("to_particles", [](const QuiverDatum &d) { return phase::to_particles(d); });

  py::class_<HamiltonianSpec>(m, "Hamiltonian")
    .def_static("trace", &HamiltonianSpec::trace, "i"_a)
    .def_static("residue_at_b", &HamiltonianSpec::residue_at_b, "i"_a)
    .def_static("residue_at", &HamiltonianSpec::residue_at, "pole"_a, "i"_a)
    .def_static("particle_h2", &HamiltonianSpec::particle_h2)
    .def_property_readonly("name", &HamiltonianSpec::name)
    .def("__repr__", [](const HamiltonianSpec &h) { return "Hamiltonian(" + h.name() + ")"; });

  m.def("evaluate", [](const HamiltonianSpec &h, const PhasePoint &x) { return ham::evaluate(h, x); }, "h"_a,
        "at"_a);
  m.def("poisson_bracket",
        [](const HamiltonianSpec &f, const HamiltonianSpec &g, const PhasePoint &x, double step)
        {
          GradientOptions opts;
          opts.step = step;
          return ham::poisson_bracket(f, g, x, opts);
        },
        "f"_a, "g"_a, "at"_a, "step"_a = GradientOptions{}.step);

  m.def("higgs", [](const PhasePoint &x, Complex z)
        { return std::visit([&](const auto &s) { return lax::higgs(s, z).value; }, x); }, "at"_a, "z"_a);
  m.def("char_poly_coeffs", [](const CMatrix &mat) { return lax::char_poly_coeffs(mat); });
  m.def("spectral_coeffs",
        [](const PhasePoint &x, const std::vector<Complex> &grid)
        { return std::visit([&](const auto &s) { return lax::spectral_record(s, grid).coeffs; }, x); },
        "at"_a, "z_grid"_a);

  m.def("exact_flow", &flows::exact_flow, "datum"_a, "i"_a, "t"_a);
  m.def("eigenvalue_projection", &flows::eigenvalue_projection, "datum"_a, "i"_a, "times"_a);

  py::class_<Trajectory>(m, "Trajectory")
    .def_readonly("times", &Trajectory::times)
    .def_readonly("states", &Trajectory::states)
    .def_readonly("invariant_values", &Trajectory::invariant_values)
    .def_readonly("moment_residuals", &Trajectory::moment_residuals)
    .def_readonly("drifted", &Trajectory::drifted)
    .def("max_invariant_drift", &Trajectory::max_invariant_drift)
    .def("max_spectral_drift", &Trajectory::max_spectral_drift);

  m.def("flow",
        [](const PhasePoint &start, const HamiltonianSpec &h, double t_final, double dt, int record_every,
           bool exact, const std::vector<HamiltonianSpec> &invariants, const std::vector<Complex> &z_grid)
        {
          FlowSpec spec;
          spec.hamiltonian = h;
          spec.method = exact ? FlowMethod::Exact : FlowMethod::RK4;
          spec.t_final = t_final;
          spec.dt = dt;
          spec.record_every = record_every;
          TrajectoryOptions options;
          options.invariants = invariants;
          options.z_grid = z_grid;
          py::gil_scoped_release release;
          return flows::ode_flow(start, spec, options);
        },
        "start"_a, "hamiltonian"_a, "t_final"_a = 1.0, "dt"_a = 1.0e-3, "record_every"_a = 1, "exact"_a = false,
        "invariants"_a = std::vector<HamiltonianSpec>{}, "z_grid"_a = std::vector<Complex>{});

  m.def("to_json", [](const PhasePoint &x) { return io::to_json(x).dump(); });

  m.def("run", &run_command,
        "Runs a cm-lax command on a config file and returns (exit_code, stdout, stderr).", "command"_a,
        "config"_a, "out"_a = std::nullopt, "format"_a = std::nullopt, "to"_a = "particle");
}
