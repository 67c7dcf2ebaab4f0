#include "cmlax/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "cmlax/errors.hpp"
#include "cmlax/io.hpp"

namespace cmlax::cli
{

namespace fs = std::filesystem;

namespace
{

struct Prepared
{
  RunConfig config;
  fs::path directory;
  std::string format;
};

Prepared prepare(const std::string &config_path, const RunOptions &options)
{
  Prepared p{io::load_config(config_path), {}, {}};
  p.directory = options.out ? fs::path(*options.out) : fs::path(p.config.output_directory);
  if (!options.subdirectory.empty())
  {
    p.directory /= options.subdirectory;
  }
  p.format = options.format ? *options.format : p.config.output_format;
  if (p.format != "csv" && p.format != "json")
  {
    throw ConfigError("--format must be 'csv' or 'json'");
  }
  return p;
}

std::ofstream open_output(const fs::path &dir, const std::string &name)
{
  fs::create_directories(dir);
  std::ofstream os(dir / name, std::ios::binary | std::ios::trunc);
  if (!os)
  {
    throw ConfigError("cannot write output file '" + (dir / name).string() + "'");
  }
  return os;
}

void write_json(const fs::path &dir, const std::string &name, const Json &j)
{
  auto os = open_output(dir, name);
  os << j.dump(2) << '\n';
}

std::string fmt(double x)
{
  return io::format_double(x);
}

double spin_residual(const ParticleState &s)
{
  double worst = 0.0;
  const CMatrix f = s.contractions();
  for (int i = 0; i < s.n(); ++i)
  {
    worst = std::max(worst, std::abs(f(i, i) - 1.0));
  }
  return worst;
}

// Maps library exceptions onto exit codes; anything else propagates.
template <class Body>
int guarded(std::ostream &err, Body &&body)
{
  try
  {
    return body();
  }
  catch (const ConfigError &e)
  {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  catch (const ConstraintError &e)
  {
    err << "error: initial constraint violated: " << e.what() << '\n';
    return kConstraintViolation;
  }
  catch (const Error &e)
  {
    err << "error: numerical failure: " << e.what() << '\n';
    return kNumericalError;
  }
  catch (const fs::filesystem_error &e)
  {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

// On-shell initial point for running flows, or an exit code.
std::optional<PhasePoint> checked_initial(const RunConfig &c, std::ostream &err, int &code)
{
  if (c.initial_quiver)
  {
    const ConstraintCheck check =
      phase::check_constraint(*c.initial_quiver, kInitialConstraintTolerance);
    if (!check.on_shell)
    {
      err << "error: initial constraint violated: residual " << fmt(check.residual) << '\n';
      code = kConstraintViolation;
      return std::nullopt;
    }
    return PhasePoint{*c.initial_quiver};
  }
  return PhasePoint{phase::normalize_spins(*c.initial_particle)};
}

}  // namespace

int cmd_simulate(const std::string &config_path, const RunOptions &options, std::ostream &out,
                 std::ostream &err)
{
  return guarded(err, [&] {
    const Prepared p = prepare(config_path, options);
    const RunConfig &c = p.config;
    int code = kOk;
    const auto start = checked_initial(c, err, code);
    if (!start)
    {
      return code;
    }

    TrajectoryOptions topts;
    topts.invariants = c.invariants;
    topts.seed = c.seed;
    if (c.record_spectral)
    {
      topts.z_grid = c.z_grid;
    }
    // Exact flows live in the quiver chart.
    const ParticleState *particles = std::get_if<ParticleState>(&*start);
    const PhasePoint initial = c.flow.method == FlowMethod::Exact && particles
                                 ? PhasePoint{phase::from_particles(*particles)}
                                 : *start;
    const Trajectory traj = flows::ode_flow(initial, c.flow, topts);

    if (p.format == "csv")
    {
      auto t = open_output(p.directory, "trajectory.csv");
      io::write_trajectory_csv(t, traj);
      auto inv = open_output(p.directory, "invariants.csv");
      io::write_invariants_csv(inv, traj);
      if (c.record_spectral)
      {
        auto sp = open_output(p.directory, "spectral.csv");
        io::write_spectral_csv(sp, traj);
      }
    }
    else
    {
      write_json(p.directory, "trajectory.json", io::to_json(traj));
      Json names = Json::array();
      for (const auto &h : traj.invariants)
      {
        names.push_back(h.name());
      }
      Json values = Json::array();
      for (const auto &row : traj.invariant_values)
      {
        Json r = Json::array();
        for (const Complex v : row)
        {
          r.push_back(io::to_json(v));
        }
        values.push_back(r);
      }
      write_json(p.directory, "invariants.json",
                 {{"names", names},
                  {"times", traj.times},
                  {"values", values},
                  {"moment_residuals", traj.moment_residuals}});
      if (c.record_spectral)
      {
        Json records = Json::array();
        for (const auto &rec : traj.spectral)
        {
          records.push_back(io::to_json(rec));
        }
        write_json(p.directory, "spectral.json", {{"times", traj.times}, {"records", records}});
      }
    }

    out << "t_final=" << fmt(traj.times.empty() ? 0.0 : traj.times.back())
        << " max_invariant_drift=" << fmt(traj.max_invariant_drift())
        << " max_spectral_drift=" << fmt(traj.max_spectral_drift())
        << " max_moment_residual=" << fmt(traj.max_moment_residual())
        << (traj.drifted ? " drifted" : "") << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_convert(const std::string &config_path, const std::string &direction,
                const RunOptions &options, std::ostream &out, std::ostream &err)
{
  return guarded(err, [&] {
    if (direction != "particle" && direction != "quiver")
    {
      throw ConfigError("--to must be 'particle' or 'quiver'");
    }
    const Prepared p = prepare(config_path, options);
    RunConfig c = p.config;
    int code = kOk;
    const auto start = checked_initial(c, err, code);
    if (!start)
    {
      return code;
    }
    if (direction == "quiver")
    {
      if (c.curve.variant == Variant::Elliptic)
      {
        throw ConfigError("the elliptic variant has no quiver model");
      }
      const auto *s = std::get_if<ParticleState>(&*start);
      c.initial_quiver = s ? phase::from_particles(*s) : std::get<QuiverDatum>(*start);
      c.initial_particle.reset();
    }
    else
    {
      const auto *d = std::get_if<QuiverDatum>(&*start);
      c.initial_particle = d ? phase::to_particles(*d) : std::get<ParticleState>(*start);
      c.initial_quiver.reset();
    }
    write_json(p.directory, "converted.json", io::to_json(c));
    out << "converted to " << direction << ": " << (p.directory / "converted.json").string()
        << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_invariants(const std::string &config_path, const RunOptions &options, std::ostream &out,
                   std::ostream &err)
{
  return guarded(err, [&] {
    const Prepared p = prepare(config_path, options);
    const RunConfig &c = p.config;
    PhasePoint x = c.initial();
    double residual = 0.0;
    if (c.initial_quiver)
    {
      residual = phase::check_constraint(*c.initial_quiver, 0.0).residual;
    }
    else
    {
      try
      {
        x = phase::normalize_spins(*c.initial_particle);
      }
      catch (const ConstraintError &)
      {
        residual = spin_residual(*c.initial_particle);
      }
    }
    if (residual > kInitialConstraintTolerance)
    {
      err << "warning: initial datum is off-shell (residual " << fmt(residual)
          << "); brackets are evaluated in the chart\n";
    }

    std::vector<HamiltonianSpec> hs = c.invariants;
    if (hs.empty())
    {
      hs.push_back(c.flow.hamiltonian);
    }
    const auto m = hs.size();
    std::vector<Complex> values;
    for (const auto &h : hs)
    {
      values.push_back(ham::evaluate(h, x, c.flow.gradient.quadrature));
    }
    // Brackets use the library's default difference step, not the flow's.
    GradientOptions bracket_options;
    bracket_options.quadrature = c.flow.gradient.quadrature;
    std::vector<std::vector<double>> brackets(m, std::vector<double>(m, 0.0));
    for (std::size_t a = 0; a < m; ++a)
    {
      for (std::size_t b = 0; b < m; ++b)
      {
        brackets[a][b] = std::abs(ham::poisson_bracket(hs[a], hs[b], x, bracket_options));
      }
    }

    if (p.format == "csv")
    {
      auto inv = open_output(p.directory, "invariants.csv");
      inv << "name,value_re,value_im\n";
      for (std::size_t a = 0; a < m; ++a)
      {
        inv << hs[a].name() << ',' << fmt(values[a].real()) << ',' << fmt(values[a].imag())
            << '\n';
      }
      auto br = open_output(p.directory, "brackets.csv");
      br << "name";
      for (const auto &h : hs)
      {
        br << ',' << h.name();
      }
      br << '\n';
      for (std::size_t a = 0; a < m; ++a)
      {
        br << hs[a].name();
        for (std::size_t b = 0; b < m; ++b)
        {
          br << ',' << fmt(brackets[a][b]);
        }
        br << '\n';
      }
    }
    else
    {
      Json entries = Json::array();
      for (std::size_t a = 0; a < m; ++a)
      {
        entries.push_back({{"name", hs[a].name()}, {"value", io::to_json(values[a])}});
      }
      write_json(p.directory, "invariants.json",
                 {{"hamiltonians", entries}, {"brackets", brackets}, {"residual", residual}});
    }

    double worst = 0.0;
    for (const auto &row : brackets)
    {
      for (const double v : row)
      {
        worst = std::max(worst, v);
      }
    }
    out << "hamiltonians=" << m << " max_bracket=" << fmt(worst) << '\n';
    return static_cast<int>(kOk);
  });
}

std::size_t thread_cap(std::size_t jobs)
{
  std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("CM_LAX_THREADS"))
  {
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0)
    {
      cap = static_cast<std::size_t>(v);
    }
  }
  return std::max<std::size_t>(1, std::min(cap, jobs));
}

int run_sweep(const Command &command, const std::vector<std::string> &configs,
              const RunOptions &options, bool parallel, std::ostream &out, std::ostream &err)
{
  const std::size_t jobs = configs.size();
  std::vector<std::ostringstream> outs(jobs);
  std::vector<std::ostringstream> errs(jobs);
  std::vector<int> codes(jobs, kOk);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs; i = next++)
    {
      RunOptions run = options;
      if (jobs > 1)
      {
        run.subdirectory = fs::path(configs[i]).stem().string();
      }
      codes[i] = command(configs[i], run, outs[i], errs[i]);
    }
  };

  const std::size_t workers = parallel ? thread_cap(jobs) : 1;
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w)
  {
    pool.emplace_back(worker);
  }
  worker();
  for (auto &t : pool)
  {
    t.join();
  }

  int worst = kOk;
  for (std::size_t i = 0; i < jobs; ++i)
  {
    const std::string prefix = jobs > 1 ? configs[i] + ": " : "";
    std::istringstream o(outs[i].str());
    for (std::string line; std::getline(o, line);)
    {
      out << prefix << line << '\n';
    }
    std::istringstream e(errs[i].str());
    for (std::string line; std::getline(e, line);)
    {
      err << prefix << line << '\n';
    }
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

}  // namespace cmlax::cli
