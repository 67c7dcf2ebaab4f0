#include "cmlax/io.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "cmlax/errors.hpp"

namespace cmlax
{

namespace
{

[[noreturn]] void fail(const std::string &path, const std::string &message)
{
  throw ConfigError("config field '" + path + "': " + message);
}

const Json &member(const Json &j, const char *key, const std::string &path)
{
  if (!j.is_object() || !j.contains(key))
  {
    fail(path + "." + key, "missing");
  }
  return j.at(key);
}

void reject_unknown(const Json &j, std::initializer_list<const char *> allowed,
                    const std::string &path)
{
  if (!j.is_object())
  {
    fail(path, "expected an object");
  }
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto &[key, value] : j.items())
  {
    if (!keys.count(key))
    {
      fail(path + "." + key, "unknown field");
    }
  }
}

double number(const Json &j, const std::string &path)
{
  if (!j.is_number())
  {
    fail(path, "expected a number");
  }
  return j.get<double>();
}

int integer(const Json &j, const std::string &path)
{
  if (!j.is_number_integer())
  {
    fail(path, "expected an integer");
  }
  return j.get<int>();
}

std::string string(const Json &j, const std::string &path)
{
  if (!j.is_string())
  {
    fail(path, "expected a string");
  }
  return j.get<std::string>();
}

std::string convention_name(TrigConvention c)
{
  return c == TrigConvention::Literal ? "literal" : "cotangent";
}

TrigConvention convention_from(const Json &j, const std::string &path)
{
  const std::string s = string(j, path);
  if (s == "literal")
  {
    return TrigConvention::Literal;
  }
  if (s == "cotangent")
  {
    return TrigConvention::Cotangent;
  }
  fail(path, "expected 'literal' or 'cotangent'");
}

const char *kind_name(HamiltonianKind k)
{
  switch (k)
  {
    case HamiltonianKind::Trace:
      return "trace";
    case HamiltonianKind::ResidueAtB:
      return "residue_at_b";
    case HamiltonianKind::ResidueAt:
      return "residue_at";
    case HamiltonianKind::ParticleH2:
      return "particle_h2";
  }
  return "trace";
}

void check_shape(const CMatrix &m, Eigen::Index rows, Eigen::Index cols, const std::string &path)
{
  if (m.rows() != rows || m.cols() != cols)
  {
    fail(path, "expected a " + std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
  }
}

void write_complex_cells(std::ostream &os, Complex z)
{
  os << ',' << io::format_double(z.real()) << ',' << io::format_double(z.imag());
}

void write_state_cells(std::ostream &os, const PhasePoint &x)
{
  auto matrix = [&](const CMatrix &m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
    {
      for (Eigen::Index c = 0; c < m.cols(); ++c)
      {
        write_complex_cells(os, m(r, c));
      }
    }
  };
  if (const auto *d = std::get_if<QuiverDatum>(&x))
  {
    matrix(d->X);
    matrix(d->Y);
    matrix(d->u);
    matrix(d->v);
  }
  else
  {
    const auto &s = std::get<ParticleState>(x);
    matrix(s.q);
    matrix(s.p);
    matrix(s.a);
    matrix(s.b);
  }
}

std::vector<std::string> unique_names(const std::vector<HamiltonianSpec> &hs)
{
  std::vector<std::string> names;
  for (std::size_t i = 0; i < hs.size(); ++i)
  {
    std::string name = hs[i].name();
    for (std::size_t j = 0; j < i; ++j)
    {
      if (hs[j].name() == name)
      {
        name += "_" + std::to_string(i);
        break;
      }
    }
    names.push_back(name);
  }
  return names;
}

}  // namespace

PhasePoint RunConfig::initial() const
{
  if (initial_quiver)
  {
    return *initial_quiver;
  }
  if (initial_particle)
  {
    return *initial_particle;
  }
  throw ConfigError("config has no initial data");
}

namespace io
{

std::string format_double(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Json to_json(Complex z)
{
  return Json::array({z.real(), z.imag()});
}

Json to_json(const CVector &v)
{
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
  {
    out.push_back(to_json(v(i)));
  }
  return out;
}

Json to_json(const CMatrix &m)
{
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
  {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
    {
      row.push_back(to_json(m(r, c)));
    }
    out.push_back(row);
  }
  return out;
}

Json to_json(const Curve &c)
{
  Json j;
  j["variant"] = std::string(to_string(c.variant));
  if (c.variant == Variant::Elliptic && c.lattice)
  {
    j["lattice"] = {{"tau", to_json(c.lattice->tau())},
                    {"truncation_radius", c.lattice->truncation_radius()},
                    {"tolerance", c.lattice->tolerance()}};
  }
  if (c.variant == Variant::Trigonometric)
  {
    j["trig_convention"] = {{"zeta", convention_name(c.zeta_convention)},
                            {"kernel", convention_name(c.kernel_convention)}};
  }
  return j;
}

Json to_json(const QuiverDatum &d)
{
  Json j = to_json(d.curve);
  j["n"] = d.n();
  j["k"] = d.k();
  j["X"] = to_json(d.X);
  j["Y"] = to_json(d.Y);
  j["u"] = to_json(d.u);
  j["v"] = to_json(d.v);
  return j;
}

Json to_json(const ParticleState &s)
{
  Json j = to_json(s.curve);
  j["n"] = s.n();
  j["k"] = s.k();
  j["q"] = to_json(s.q);
  j["p"] = to_json(s.p);
  j["a"] = to_json(s.a);
  j["b"] = to_json(s.b);
  return j;
}

Json to_json(const PhasePoint &x)
{
  return std::visit([](const auto &s) { return to_json(s); }, x);
}

Json to_json(const HamiltonianSpec &h)
{
  Json j{{"kind", kind_name(h.kind)}, {"degree", h.degree}};
  if (h.kind == HamiltonianKind::ResidueAt)
  {
    j["pole"] = to_json(h.pole);
  }
  return j;
}

Json to_json(const FlowSpec &f)
{
  return {{"hamiltonian", to_json(f.hamiltonian)},
          {"method", f.method == FlowMethod::Exact ? "exact" : "rk4"},
          {"t_final", f.t_final},
          {"dt", f.dt},
          {"record_every", f.record_every},
          {"drift_tolerance", f.drift_tolerance},
          {"fd_step", f.gradient.step},
          {"quadrature",
           {{"radius", f.gradient.quadrature.radius},
            {"samples", f.gradient.quadrature.samples},
            {"tolerance", f.gradient.quadrature.tolerance}}}};
}

Json to_json(const SpectralRecord &r)
{
  Json coeffs = Json::array();
  for (const auto &row : r.coeffs)
  {
    Json c = Json::array();
    for (const Complex z : row)
    {
      c.push_back(to_json(z));
    }
    coeffs.push_back(c);
  }
  Json grid = Json::array();
  for (const Complex z : r.z_grid)
  {
    grid.push_back(to_json(z));
  }
  return {{"z_grid", grid}, {"coeffs", coeffs}};
}

Json to_json(const Trajectory &t)
{
  Json states = Json::array();
  for (const auto &x : t.states)
  {
    states.push_back(to_json(x));
  }
  return {{"seed", t.seed}, {"drifted", t.drifted}, {"times", t.times}, {"states", states}};
}

Json to_json(const RunConfig &c)
{
  Json j = to_json(c.curve);
  j["n"] = c.n;
  j["k"] = c.k;
  Json initial;
  if (c.initial_particle)
  {
    const auto &s = *c.initial_particle;
    initial["particle"] = {{"q", to_json(s.q)}, {"p", to_json(s.p)}, {"a", to_json(s.a)},
                           {"b", to_json(s.b)}};
  }
  if (c.initial_quiver)
  {
    const auto &d = *c.initial_quiver;
    initial["quiver"] = {{"X", to_json(d.X)}, {"Y", to_json(d.Y)}, {"u", to_json(d.u)},
                         {"v", to_json(d.v)}};
  }
  j["initial"] = initial;
  j["flow"] = to_json(c.flow);
  Json invariants = Json::array();
  for (const auto &h : c.invariants)
  {
    invariants.push_back(to_json(h));
  }
  j["invariants"] = invariants;
  Json grid = Json::array();
  for (const Complex z : c.z_grid)
  {
    grid.push_back(to_json(z));
  }
  j["spectral"] = {{"z_grid", grid}, {"record", c.record_spectral}};
  j["output"] = {{"directory", c.output_directory}, {"format", c.output_format}};
  j["seed"] = c.seed;
  return j;
}

Complex complex_from_json(const Json &j, const std::string &path)
{
  if (j.is_number())
  {
    return {j.get<double>(), 0.0};
  }
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
  {
    fail(path, "expected a complex number [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

CVector vector_from_json(const Json &j, const std::string &path)
{
  if (!j.is_array())
  {
    fail(path, "expected an array");
  }
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
  {
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

CMatrix matrix_from_json(const Json &j, const std::string &path)
{
  if (!j.is_array())
  {
    fail(path, "expected a matrix (array of rows)");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
  {
    const Json &row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
    {
      fail(path + "[" + std::to_string(r) + "]", "ragged matrix row");
    }
    for (Eigen::Index c = 0; c < cols; ++c)
    {
      m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)],
                                  path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

Curve curve_from_json(const Json &j, const std::string &path)
{
  Curve c;
  c.variant = [&] {
    try
    {
      return variant_from_string(string(member(j, "variant", path), path + ".variant"));
    }
    catch (const ConfigError &e)
    {
      if (std::string(e.what()).rfind("config field", 0) == 0)
      {
        throw;
      }
      fail(path + ".variant", e.what());
    }
  }();
  if (c.variant == Variant::Elliptic)
  {
    const std::string lp = path + ".lattice";
    const Json &lj = member(j, "lattice", path);
    reject_unknown(lj, {"tau", "truncation_radius", "tolerance"}, lp);
    const Complex tau = complex_from_json(member(lj, "tau", lp), lp + ".tau");
    const int radius = lj.contains("truncation_radius")
                         ? integer(lj["truncation_radius"], lp + ".truncation_radius")
                         : Lattice::kDefaultTruncation;
    const double tol = lj.contains("tolerance") ? number(lj["tolerance"], lp + ".tolerance")
                                                : Lattice::kDefaultTolerance;
    try
    {
      c.lattice.emplace(tau, radius, tol);
    }
    catch (const ConfigError &e)
    {
      fail(lp, e.what());
    }
  }
  else if (j.contains("lattice"))
  {
    fail(path + ".lattice", "only allowed for the elliptic variant");
  }
  if (j.contains("trig_convention"))
  {
    const std::string tp = path + ".trig_convention";
    const Json &tj = j["trig_convention"];
    reject_unknown(tj, {"zeta", "kernel"}, tp);
    if (tj.contains("zeta"))
    {
      c.zeta_convention = convention_from(tj["zeta"], tp + ".zeta");
    }
    if (tj.contains("kernel"))
    {
      c.kernel_convention = convention_from(tj["kernel"], tp + ".kernel");
    }
  }
  return c;
}

QuiverDatum quiver_from_json(const Json &j, const Curve &curve, const std::string &path)
{
  if (curve.variant == Variant::Elliptic)
  {
    fail(path, "the elliptic variant has no quiver model");
  }
  QuiverDatum d{curve, matrix_from_json(member(j, "X", path), path + ".X"),
                matrix_from_json(member(j, "Y", path), path + ".Y"),
                matrix_from_json(member(j, "u", path), path + ".u"),
                matrix_from_json(member(j, "v", path), path + ".v")};
  const auto n = d.X.rows();
  const auto k = d.u.cols();
  check_shape(d.X, n, n, path + ".X");
  check_shape(d.Y, n, n, path + ".Y");
  check_shape(d.u, n, k, path + ".u");
  check_shape(d.v, k, n, path + ".v");
  return d;
}

ParticleState particle_from_json(const Json &j, const Curve &curve, const std::string &path)
{
  ParticleState s{curve, vector_from_json(member(j, "q", path), path + ".q"),
                  vector_from_json(member(j, "p", path), path + ".p"),
                  matrix_from_json(member(j, "a", path), path + ".a"),
                  matrix_from_json(member(j, "b", path), path + ".b")};
  const auto n = s.q.size();
  if (s.p.size() != n)
  {
    fail(path + ".p", "length differs from q");
  }
  check_shape(s.a, n, s.a.cols(), path + ".a");
  check_shape(s.b, n, s.a.cols(), path + ".b");
  return s;
}

HamiltonianSpec hamiltonian_from_json(const Json &j, const std::string &path)
{
  reject_unknown(j, {"kind", "degree", "pole"}, path);
  const std::string kind = string(member(j, "kind", path), path + ".kind");
  HamiltonianSpec h;
  if (kind == "trace")
  {
    h.kind = HamiltonianKind::Trace;
  }
  else if (kind == "residue_at_b")
  {
    h.kind = HamiltonianKind::ResidueAtB;
  }
  else if (kind == "residue_at")
  {
    h.kind = HamiltonianKind::ResidueAt;
    h.pole = complex_from_json(member(j, "pole", path), path + ".pole");
  }
  else if (kind == "particle_h2")
  {
    h.kind = HamiltonianKind::ParticleH2;
  }
  else
  {
    fail(path + ".kind", "unknown Hamiltonian kind '" + kind + "'");
  }
  h.degree = h.kind == HamiltonianKind::ParticleH2 && !j.contains("degree")
               ? 2
               : integer(member(j, "degree", path), path + ".degree");
  if (h.degree < 1)
  {
    fail(path + ".degree", "must be positive");
  }
  return h;
}

FlowSpec flow_from_json(const Json &j, const std::string &path)
{
  reject_unknown(j,
                 {"hamiltonian", "method", "t_final", "dt", "record_every", "drift_tolerance",
                  "fd_step", "quadrature"},
                 path);
  FlowSpec f;
  f.hamiltonian = hamiltonian_from_json(member(j, "hamiltonian", path), path + ".hamiltonian");
  const std::string method = j.contains("method") ? string(j["method"], path + ".method") : "rk4";
  if (method == "exact")
  {
    f.method = FlowMethod::Exact;
  }
  else if (method == "rk4")
  {
    f.method = FlowMethod::RK4;
  }
  else
  {
    fail(path + ".method", "expected 'exact' or 'rk4'");
  }
  f.t_final = number(member(j, "t_final", path), path + ".t_final");
  if (j.contains("dt"))
  {
    f.dt = number(j["dt"], path + ".dt");
  }
  if (j.contains("record_every"))
  {
    f.record_every = integer(j["record_every"], path + ".record_every");
  }
  if (j.contains("drift_tolerance"))
  {
    f.drift_tolerance = number(j["drift_tolerance"], path + ".drift_tolerance");
  }
  if (j.contains("fd_step"))
  {
    f.gradient.step = number(j["fd_step"], path + ".fd_step");
  }
  if (j.contains("quadrature"))
  {
    const std::string qp = path + ".quadrature";
    const Json &qj = j["quadrature"];
    reject_unknown(qj, {"radius", "samples", "tolerance"}, qp);
    if (qj.contains("radius"))
    {
      f.gradient.quadrature.radius = number(qj["radius"], qp + ".radius");
    }
    if (qj.contains("samples"))
    {
      f.gradient.quadrature.samples = integer(qj["samples"], qp + ".samples");
    }
    if (qj.contains("tolerance"))
    {
      f.gradient.quadrature.tolerance = number(qj["tolerance"], qp + ".tolerance");
    }
  }
  if (!(f.t_final >= 0.0))
  {
    fail(path + ".t_final", "must be non-negative");
  }
  if (!(f.dt > 0.0))
  {
    fail(path + ".dt", "must be positive");
  }
  if (f.record_every < 1)
  {
    fail(path + ".record_every", "must be positive");
  }
  if (!(f.gradient.step > 0.0))
  {
    fail(path + ".fd_step", "must be positive");
  }
  return f;
}

RunConfig config_from_json(const Json &j)
{
  const std::string root = "$";
  reject_unknown(j,
                 {"variant", "lattice", "trig_convention", "n", "k", "initial", "flow",
                  "invariants", "spectral", "output", "seed"},
                 root);
  RunConfig c;
  c.curve = curve_from_json(j, root);
  c.n = integer(member(j, "n", root), "$.n");
  c.k = integer(member(j, "k", root), "$.k");
  if (c.n < 1)
  {
    fail("$.n", "must be positive");
  }
  if (c.k < 0)
  {
    fail("$.k", "must be non-negative");
  }

  const Json &initial = member(j, "initial", root);
  reject_unknown(initial, {"particle", "quiver"}, "$.initial");
  const bool has_particle = initial.contains("particle");
  const bool has_quiver = initial.contains("quiver");
  if (has_particle == has_quiver)
  {
    fail("$.initial", "exactly one of 'particle' or 'quiver' is required");
  }
  if (has_particle)
  {
    reject_unknown(initial["particle"], {"q", "p", "a", "b"}, "$.initial.particle");
    c.initial_particle = particle_from_json(initial["particle"], c.curve, "$.initial.particle");
    if (c.initial_particle->n() != c.n || c.initial_particle->k() != c.k)
    {
      fail("$.initial.particle", "shape does not match n, k");
    }
  }
  else
  {
    reject_unknown(initial["quiver"], {"X", "Y", "u", "v"}, "$.initial.quiver");
    c.initial_quiver = quiver_from_json(initial["quiver"], c.curve, "$.initial.quiver");
    if (c.initial_quiver->n() != c.n || c.initial_quiver->k() != c.k)
    {
      fail("$.initial.quiver", "shape does not match n, k");
    }
  }

  c.flow = flow_from_json(member(j, "flow", root), "$.flow");
  if (c.flow.method == FlowMethod::Exact &&
      (c.flow.hamiltonian.kind != HamiltonianKind::Trace || c.curve.variant == Variant::Elliptic))
  {
    fail("$.flow.method", "exact flows need a trace Hamiltonian on a rational/trigonometric system");
  }
  if (c.flow.hamiltonian.kind == HamiltonianKind::ResidueAt &&
      c.curve.distance_to_singular(c.flow.hamiltonian.pole) < kPoleThreshold)
  {
    fail("$.flow.hamiltonian.pole", "pole on the singular set");
  }

  if (j.contains("invariants"))
  {
    const Json &inv = j["invariants"];
    if (!inv.is_array())
    {
      fail("$.invariants", "expected an array");
    }
    for (std::size_t i = 0; i < inv.size(); ++i)
    {
      c.invariants.push_back(
        hamiltonian_from_json(inv[i], "$.invariants[" + std::to_string(i) + "]"));
    }
  }

  if (j.contains("spectral"))
  {
    const Json &sp = j["spectral"];
    reject_unknown(sp, {"z_grid", "record"}, "$.spectral");
    if (sp.contains("z_grid"))
    {
      const CVector grid = vector_from_json(sp["z_grid"], "$.spectral.z_grid");
      c.z_grid.assign(grid.begin(), grid.end());
    }
    if (sp.contains("record"))
    {
      if (!sp["record"].is_boolean())
      {
        fail("$.spectral.record", "expected a boolean");
      }
      c.record_spectral = sp["record"].get<bool>();
    }
    for (std::size_t i = 0; i < c.z_grid.size(); ++i)
    {
      if (c.curve.distance_to_singular(c.z_grid[i]) < kPoleThreshold ||
          std::abs(c.z_grid[i]) < kPoleThreshold)
      {
        fail("$.spectral.z_grid[" + std::to_string(i) + "]", "grid point on a pole");
      }
    }
  }

  for (std::size_t i = 0; i < c.invariants.size(); ++i)
  {
    const auto &h = c.invariants[i];
    if (h.kind == HamiltonianKind::Trace && c.curve.variant == Variant::Elliptic)
    {
      fail("$.invariants[" + std::to_string(i) + "]",
           "trace Hamiltonians need a rational/trigonometric system");
    }
    if (h.kind == HamiltonianKind::ResidueAt &&
        c.curve.distance_to_singular(h.pole) < kPoleThreshold)
    {
      fail("$.invariants[" + std::to_string(i) + "].pole", "pole on the singular set");
    }
  }

  if (j.contains("output"))
  {
    const Json &out = j["output"];
    reject_unknown(out, {"directory", "format"}, "$.output");
    if (out.contains("directory"))
    {
      c.output_directory = string(out["directory"], "$.output.directory");
    }
    if (out.contains("format"))
    {
      c.output_format = string(out["format"], "$.output.format");
      if (c.output_format != "csv" && c.output_format != "json")
      {
        fail("$.output.format", "expected 'csv' or 'json'");
      }
    }
  }
  if (j.contains("seed"))
  {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
    {
      fail("$.seed", "expected an integer");
    }
    c.seed = j["seed"].get<std::uint64_t>();
  }
  return c;
}

RunConfig load_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot read config file '" + path + "'");
  }
  Json j;
  try
  {
    in >> j;
  }
  catch (const Json::parse_error &e)
  {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

std::vector<std::string> state_columns(const PhasePoint &x)
{
  std::vector<std::string> cols;
  auto matrix = [&](const std::string &name, Eigen::Index rows, Eigen::Index ncols,
                    bool vector_like) {
    for (Eigen::Index r = 0; r < rows; ++r)
    {
      for (Eigen::Index c = 0; c < ncols; ++c)
      {
        const std::string base = vector_like
                                   ? name + "_" + std::to_string(r)
                                   : name + "_" + std::to_string(r) + "_" + std::to_string(c);
        cols.push_back(base + "_re");
        cols.push_back(base + "_im");
      }
    }
  };
  if (const auto *d = std::get_if<QuiverDatum>(&x))
  {
    matrix("X", d->n(), d->n(), false);
    matrix("Y", d->n(), d->n(), false);
    matrix("u", d->n(), d->k(), false);
    matrix("v", d->k(), d->n(), false);
  }
  else
  {
    const auto &s = std::get<ParticleState>(x);
    matrix("q", s.n(), 1, true);
    matrix("p", s.n(), 1, true);
    matrix("a", s.n(), s.k(), false);
    matrix("b", s.n(), s.k(), false);
  }
  return cols;
}

void write_trajectory_csv(std::ostream &os, const Trajectory &t)
{
  if (t.states.empty())
  {
    os << "t\n";
    return;
  }
  os << 't';
  for (const auto &c : state_columns(t.states.front()))
  {
    os << ',' << c;
  }
  for (const auto &name : unique_names(t.invariants))
  {
    os << ',' << name << "_re," << name << "_im";
  }
  os << '\n';
  for (std::size_t i = 0; i < t.states.size(); ++i)
  {
    os << format_double(t.times[i]);
    write_state_cells(os, t.states[i]);
    if (i < t.invariant_values.size())
    {
      for (const Complex v : t.invariant_values[i])
      {
        write_complex_cells(os, v);
      }
    }
    os << '\n';
  }
}

void write_invariants_csv(std::ostream &os, const Trajectory &t)
{
  os << 't';
  for (const auto &name : unique_names(t.invariants))
  {
    os << ',' << name << "_re," << name << "_im";
  }
  if (!t.moment_residuals.empty())
  {
    os << ",moment_residual";
  }
  os << '\n';
  for (std::size_t i = 0; i < t.times.size(); ++i)
  {
    os << format_double(t.times[i]);
    for (const Complex v : t.invariant_values[i])
    {
      write_complex_cells(os, v);
    }
    if (!t.moment_residuals.empty())
    {
      os << ',' << format_double(t.moment_residuals[i]);
    }
    os << '\n';
  }
}

void write_spectral_csv(std::ostream &os, const Trajectory &t)
{
  const std::size_t width = t.spectral.empty() || t.spectral.front().coeffs.empty()
                              ? 0
                              : t.spectral.front().coeffs.front().size();
  os << "t,z_re,z_im";
  for (std::size_t c = 0; c < width; ++c)
  {
    os << ",c" << c << "_re,c" << c << "_im";
  }
  os << '\n';
  for (std::size_t i = 0; i < t.spectral.size(); ++i)
  {
    const auto &rec = t.spectral[i];
    for (std::size_t g = 0; g < rec.z_grid.size(); ++g)
    {
      os << format_double(t.times[i]);
      write_complex_cells(os, rec.z_grid[g]);
      for (const Complex c : rec.coeffs[g])
      {
        write_complex_cells(os, c);
      }
      os << '\n';
    }
  }
}

void write_spectral_record_csv(std::ostream &os, const SpectralRecord &r)
{
  const std::size_t width = r.coeffs.empty() ? 0 : r.coeffs.front().size();
  os << "z_re,z_im";
  for (std::size_t c = 0; c < width; ++c)
  {
    os << ",c" << c << "_re,c" << c << "_im";
  }
  os << '\n';
  for (std::size_t g = 0; g < r.z_grid.size(); ++g)
  {
    os << format_double(r.z_grid[g].real()) << ',' << format_double(r.z_grid[g].imag());
    for (const Complex c : r.coeffs[g])
    {
      write_complex_cells(os, c);
    }
    os << '\n';
  }
}

}  // namespace io

}  // namespace cmlax
