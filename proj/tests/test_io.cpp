#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "cmlax/errors.hpp"
#include "cmlax/io.hpp"
#include "support.hpp"

using namespace cmlax;

namespace
{

const std::filesystem::path kSource = CMLAX_SOURCE_DIR;

Json base_config()
{
  return Json::parse(R"({
    "variant": "rational", "n": 2, "k": 1,
    "initial": {"quiver": {"X": [[0, 0], [0, 1]], "Y": [[0, -1], [1, 0]],
                           "u": [[1], [-1]], "v": [[1, -1]]}},
    "flow": {"hamiltonian": {"kind": "trace", "degree": 2}, "method": "rk4",
             "t_final": 0.01, "dt": 0.001, "record_every": 5},
    "invariants": [{"kind": "trace", "degree": 1}, {"kind": "trace", "degree": 2}],
    "spectral": {"z_grid": [[1, 0], [2, 0], [1, 1]], "record": true}
  })");
}

std::string config_error(const Json &j)
{
  try
  {
    io::config_from_json(j);
  }
  catch (const ConfigError &e)
  {
    return e.what();
  }
  return {};
}

std::vector<std::string> lines(const std::string &text)
{
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
  {
    out.push_back(line);
  }
  return out;
}

std::size_t fields(const std::string &line)
{
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

Trajectory short_run()
{
  const RunConfig c = io::config_from_json(base_config());
  TrajectoryOptions opts;
  opts.invariants = c.invariants;
  opts.z_grid = c.z_grid;
  return flows::ode_flow(c.initial(), c.flow, opts);
}

}  // namespace

TEST_CASE("complex numbers and matrices encode as [re, im] and row-major arrays")
{
  CHECK(io::to_json(Complex(1.5, -2.0)) == Json::parse("[1.5, -2.0]"));
  CMatrix m(2, 3);
  m << 1.0, 2.0, 3.0, 4.0, 5.0, Complex(0.0, 6.0);
  CHECK(io::to_json(m) == Json::parse("[[[1,0],[2,0],[3,0]],[[4,0],[5,0],[0,6]]]"));
  CHECK((io::matrix_from_json(io::to_json(m), "$") - m).norm() == 0.0);
  CHECK(io::complex_from_json(Json(2.5), "$") == Complex(2.5, 0.0));
  CHECK_THROWS_AS(io::complex_from_json(Json::parse("[1, 2, 3]"), "$"), ConfigError);
  CHECK_THROWS_AS(io::matrix_from_json(Json::parse("[[1, 2], [3]]"), "$"), ConfigError);
}

TEST_CASE("full precision float formatting")
{
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(1.0 / 3.0) == "0.33333333333333331");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i)
  {
    const double x = u(rng) / (1.0 + i);
    CHECK(std::stod(io::format_double(x)) == x);
  }
}

TEST_CASE("config round trip is idempotent")
{
  std::vector<std::filesystem::path> files;
  for (const auto &dir : {kSource / "configs", kSource / "tests" / "fixtures"})
  {
    for (const auto &entry : std::filesystem::directory_iterator(dir))
    {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  int accepted = 0;
  for (const auto &file : files)
  {
    RunConfig first;
    try
    {
      first = io::load_config(file.string());
    }
    catch (const ConfigError &)
    {
      continue;
    }
    ++accepted;
    CAPTURE(file.string());
    const Json once = io::to_json(first);
    const Json twice = io::to_json(io::config_from_json(once));
    CHECK(once == twice);
    CHECK(once.dump() == twice.dump());
  }
  CHECK(accepted >= 6);
}

TEST_CASE("round trip keeps every field")
{
  Json j = base_config();
  j["variant"] = "trigonometric";
  j["trig_convention"] = {{"zeta", "cotangent"}, {"kernel", "literal"}};
  j["initial"]["quiver"]["X"] = Json::parse("[[1, 0], [0, 2]]");
  j["flow"]["drift_tolerance"] = 1e-5;
  j["invariants"].push_back({{"kind", "residue_at"}, {"degree", 2}, {"pole", {0.3, 0.1}}});
  j["output"] = {{"directory", "somewhere"}, {"format", "json"}};
  j["seed"] = 42;
  const RunConfig c = io::config_from_json(j);
  CHECK(c.curve.zeta_convention == TrigConvention::Cotangent);
  CHECK(c.curve.kernel_convention == TrigConvention::Literal);
  CHECK(c.flow.drift_tolerance == 1e-5);
  CHECK(c.invariants.back().pole == Complex(0.3, 0.1));
  CHECK(c.output_directory == "somewhere");
  CHECK(c.output_format == "json");
  CHECK(c.seed == 42);
  const RunConfig back = io::config_from_json(io::to_json(c));
  CHECK(back.curve.zeta_convention == TrigConvention::Cotangent);
  CHECK(back.invariants == c.invariants);
  CHECK(back.flow.hamiltonian == c.flow.hamiltonian);
  CHECK(back.z_grid == c.z_grid);
  CHECK(back.seed == 42);

  Json e = Json::parse(R"({"variant": "elliptic", "lattice": {"tau": [0.5, 0.9]}, "n": 1, "k": 1,
    "initial": {"particle": {"q": [[0.1, 0]], "p": [[0.2, 0]], "a": [[1]], "b": [[1]]}},
    "flow": {"hamiltonian": {"kind": "particle_h2"}, "t_final": 0.5}})");
  const RunConfig ec = io::config_from_json(e);
  CHECK(ec.curve.lattice->tau() == Complex(0.5, 0.9));
  CHECK(io::config_from_json(io::to_json(ec)).curve.lattice->tau() == Complex(0.5, 0.9));
}

TEST_CASE("config errors name the offending field")
{
  Json j = base_config();
  j["flow"]["method"] = "euler";
  CHECK(config_error(j).find("'$.flow.method'") != std::string::npos);

  j = base_config();
  j["flow"]["colour"] = 1;
  CHECK(config_error(j).find("'$.flow.colour'") != std::string::npos);

  j = base_config();
  j.erase("n");
  CHECK(config_error(j).find("'$.n'") != std::string::npos);

  j = base_config();
  j["initial"]["quiver"]["u"] = Json::parse("[[1], [1], [1]]");
  CHECK(config_error(j).find("'$.initial.quiver") != std::string::npos);

  j = base_config();
  j["initial"]["particle"] = Json::parse(R"({"q": [0, 1], "p": [0, 0], "a": [[1], [1]], "b": [[1], [1]]})");
  CHECK(config_error(j).find("'$.initial'") != std::string::npos);

  j = base_config();
  j["spectral"]["z_grid"][1] = {0, 0};
  CHECK(config_error(j).find("'$.spectral.z_grid[1]'") != std::string::npos);

  j = base_config();
  j["invariants"][1]["degree"] = 0;
  CHECK(config_error(j).find("'$.invariants[1].degree'") != std::string::npos);

  j = base_config();
  j["invariants"].push_back({{"kind", "residue_at"}, {"degree", 2}, {"pole", {0, 0}}});
  CHECK(config_error(j).find("'$.invariants[2].pole'") != std::string::npos);

  j = base_config();
  j["output"] = {{"format", "xml"}};
  CHECK(config_error(j).find("'$.output.format'") != std::string::npos);

  j = base_config();
  j["variant"] = "hyperbolic";
  CHECK(config_error(j).find("'$.variant'") != std::string::npos);

  j = base_config();
  j["flow"].erase("t_final");
  CHECK(config_error(j).find("'$.flow.t_final'") != std::string::npos);

  j = base_config();
  j["flow"]["dt"] = -1.0;
  CHECK(config_error(j).find("'$.flow.dt'") != std::string::npos);

  j = base_config();
  j["flow"]["method"] = "exact";
  j["flow"]["hamiltonian"] = {{"kind", "particle_h2"}};
  CHECK(config_error(j).find("'$.flow.method'") != std::string::npos);

  j = base_config();
  j["variant"] = "elliptic";
  j["lattice"] = {{"tau", {0, 1}}};
  CHECK(config_error(j).find("'$.initial.quiver'") != std::string::npos);

  j = base_config();
  j["lattice"] = {{"tau", {0, 1}}};
  CHECK(config_error(j).find("'$.lattice'") != std::string::npos);

  CHECK_THROWS_AS(io::load_config((kSource / "tests" / "fixtures" / "malformed.json").string()), ConfigError);
  CHECK_THROWS_AS(io::load_config((kSource / "no_such_file.json").string()), ConfigError);
}

TEST_CASE("trajectory CSV layout")
{
  const Trajectory t = short_run();
  std::ostringstream os;
  io::write_trajectory_csv(os, t);
  const std::string text = os.str();
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');
  const auto rows = lines(text);
  REQUIRE(rows.size() == t.times.size() + 1);
  const std::vector<std::string> columns = io::state_columns(t.states.front());
  CHECK(columns.front() == "X_0_0_re");
  CHECK(columns.size() == 2 * 2 * (4 + 4 + 2 + 2) / 2);
  std::string header = "t";
  for (const auto &c : columns)
  {
    header += "," + c;
  }
  header += ",trace1_re,trace1_im,trace2_re,trace2_im";
  CHECK(rows[0] == header);
  for (std::size_t r = 1; r < rows.size(); ++r)
  {
    CHECK(fields(rows[r]) == fields(rows[0]));
  }
  CHECK(rows[1].rfind("0,", 0) == 0);
  CHECK(rows.back().rfind(io::format_double(t.times.back()) + ",", 0) == 0);
}

TEST_CASE("invariant and spectral CSV layout")
{
  const Trajectory t = short_run();
  std::ostringstream inv;
  io::write_invariants_csv(inv, t);
  const auto irows = lines(inv.str());
  CHECK(irows[0] == "t,trace1_re,trace1_im,trace2_re,trace2_im,moment_residual");
  CHECK(irows.size() == t.times.size() + 1);
  // trace2 of the two-body example is -1.
  CHECK(irows[1] == "0,0,0,-1,0,0");

  std::ostringstream sp;
  io::write_spectral_csv(sp, t);
  const auto srows = lines(sp.str());
  CHECK(srows[0] == "t,z_re,z_im,c0_re,c0_im,c1_re,c1_im,c2_re,c2_im");
  CHECK(srows.size() == 3 * t.times.size() + 1);
  CHECK(srows[1].rfind("0,1,0,1,0,", 0) == 0);

  std::ostringstream rec;
  io::write_spectral_record_csv(rec, t.spectral.front());
  const auto rrows = lines(rec.str());
  CHECK(rrows[0] == "z_re,z_im,c0_re,c0_im,c1_re,c1_im,c2_re,c2_im");
  CHECK(rrows.size() == 4);
}

TEST_CASE("particle state columns")
{
  std::mt19937_64 rng(2);
  const PhasePoint s = support::random_particles(rng, Curve::rational(), 2, 2);
  const auto columns = io::state_columns(s);
  CHECK(columns.size() == 2 * (2 + 2 + 4 + 4));
  CHECK(columns[0] == "q_0_re");
  CHECK(columns[1] == "q_0_im");
  CHECK(std::find(columns.begin(), columns.end(), "a_1_0_re") != columns.end());
  CHECK(std::find(columns.begin(), columns.end(), "b_1_1_im") != columns.end());
}

TEST_CASE("trajectory JSON structure")
{
  const Trajectory t = short_run();
  const Json j = io::to_json(t);
  CHECK(j["times"].size() == t.times.size());
  CHECK(j["states"][0]["X"] == io::to_json(std::get<QuiverDatum>(t.states[0]).X));
  CHECK(j["drifted"] == false);
  const Json rec = io::to_json(t.spectral.front());
  CHECK(rec["z_grid"][2] == Json::parse("[1.0, 1.0]"));
  CHECK(rec["coeffs"].size() == 3);
  CHECK(rec["coeffs"][0][0] == Json::parse("[1.0, 0.0]"));
}
