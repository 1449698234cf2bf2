#include "mspde/harness.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

using namespace mspde;

namespace {

std::string first_line(const std::filesystem::path& path)
{
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    return line;
}

std::filesystem::path scratch_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("mspde_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("config keys parse and validate")
{
    RunConfig c;
    set_config_value(c, "problem", "nls");
    set_config_value(c, "variant", "dg");
    set_config_value(c, "q", "1");
    set_config_value(c, "dt", "0.05");
    set_config_value(c, "T", "2");
    CHECK(c.problem == "nls");
    CHECK(c.variant == Scheme::DgPrimary);
    CHECK(c.q == 1);
    CHECK(*c.dt == 0.05);
    CHECK(c.final_time == 2.0);
    CHECK(c.solver_config().dx == doctest::Approx(0.4));
    CHECK_THROWS_AS(set_config_value(c, "colour", "red"), std::invalid_argument);
    CHECK_THROWS_AS(set_config_value(c, "q", "one"), std::invalid_argument);
    CHECK_THROWS_AS(set_config_value(c, "problem", "heat"), std::invalid_argument);
}

TEST_CASE("config file honours comments and skipped keys")
{
    const auto dir = scratch_dir("config");
    const auto path = dir / "run.cfg";
    std::ofstream(path) << "# comment\nproblem = nonlinear-wave\np=3\nq=1\n";
    RunConfig c;
    read_config_file(c, path.string(), {"p"});
    CHECK(c.problem == "nonlinear-wave");
    CHECK(c.q == 1);
    CHECK(c.p == 1);
    CHECK_THROWS(read_config_file(c, (dir / "missing.cfg").string()));
}

TEST_CASE("refinement levels")
{
    const GridLevel w = refinement_level("linear-wave", 3);
    CHECK(w.dt == 0.125);
    CHECK(w.dx == 0.125);
    CHECK(w.h == 0.125);
    const GridLevel n1 = refinement_level("nls", 1);
    CHECK(n1.dt == doctest::Approx(0.1));
    CHECK(n1.dx == doctest::Approx(0.4));
    const GridLevel n3 = refinement_level("nls", 3);
    CHECK(n3.dt == doctest::Approx(0.025));
    CHECK(n3.dx == doctest::Approx(0.1));
}

TEST_CASE("number formatting")
{
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(-1.0 / 0.0) == "-inf");
}

TEST_CASE("run writes invariants and laws")
{
    const auto dir = scratch_dir("run");
    RunConfig c;
    c.dx = 0.25;
    c.final_time = 0.3;
    c.out = dir.string();
    std::ostringstream log;
    CHECK(cmd_run(c, log) == kExitSuccess);
    CHECK(first_line(dir / "invariants.csv") ==
          "t,mass_u,mass_v,mass_w,momentum,energy,dev_mass_u,dev_mass_v,dev_mass_w,dev_momentum,"
          "dev_energy");
    CHECK(first_line(dir / "laws.csv").rfind("slab,t_start,t_end,energy_change", 0) == 0);
}

TEST_CASE("run rejects an incommensurate mesh width")
{
    RunConfig c;
    c.dx = 0.3;
    c.out = scratch_dir("bad").string();
    std::ostringstream log;
    CHECK(cmd_run(c, log) == kExitInvalidConfig);
}

TEST_CASE("run reports solver failure")
{
    const auto dir = scratch_dir("fail");
    RunConfig c;
    c.problem = "nls";
    c.dx = 4.0;
    c.dt = 0.5;
    c.max_newton_iterations = 1;
    c.newton_tolerance = 1e-14;
    c.out = dir.string();
    std::ostringstream log;
    CHECK(cmd_run(c, log) == kExitSolverFailure);
    std::ifstream in(dir / "invariants.csv");
    std::string line, last;
    while (std::getline(in, line))
        last = line;
    CHECK(last.rfind("failure,slab=0", 0) == 0);
}

TEST_CASE("converge writes a table with empty first rates")
{
    const auto dir = scratch_dir("converge");
    RunConfig c;
    c.imin = 2;
    c.imax = 3;
    c.out = dir.string();
    std::ostringstream log;
    CHECK(cmd_converge(c, log) == kExitSuccess);
    std::ifstream in(dir / "converge.csv");
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "i,h,e_u,e_v,e_w,eoc_u,eoc_v,eoc_w");
    CHECK(row.substr(row.size() - 3) == ",,,");
}

TEST_CASE("verify suite passes and catches a corrupted flux")
{
    bool all = true;
    for (const PropertyResult& r : verify_suite(7))
        all = all && r.passed;
    CHECK(all);
    bool caught = false;
    for (const PropertyResult& r : verify_suite(7, -1.0))
        caught = caught || !r.passed;
    CHECK(caught);
}
