#pragma once

#include "mspde/diagnostics.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mspde {

enum ExitCode { kExitSuccess = 0, kExitSolverFailure = 1, kExitInvalidConfig = 2 };

/// Settings shared by the run, converge and verify commands.
struct RunConfig
{
    std::string problem = "linear-wave";
    Scheme variant = Scheme::CgPrimary;
    int q = 0;
    int p = 1;
    std::optional<double> dt;  ///< default 0.1
    std::optional<double> dx;  ///< default 0.4 for nls, 0.05 otherwise
    int imin = 2;
    int imax = 5;
    double final_time = 1.0;
    std::string out = ".";
    unsigned seed = 1;
    double newton_tolerance = 1e-12;
    int max_newton_iterations = 50;

    SolverConfig solver_config() const;
};

/// Sets one key (problem, variant, q, p, dt, dx, imin, imax, T, out, seed,
/// tol, maxit). Throws std::invalid_argument on an unknown key or bad value.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

/// Reads key=value lines ('#' starts a comment). Keys listed in `skip` are
/// ignored so that command-line flags can take precedence.
void read_config_file(RunConfig& config, const std::string& path,
                      const std::vector<std::string>& skip = {});

/// Mesh sizes of refinement level i. Wave problems couple dt = dx = 2^-i;
/// nls halves dt = 0.1 and dx = 0.4 from level 1 on. h is dt.
struct GridLevel
{
    int i = 0;
    double h = 0.0;
    double dt = 0.0;
    double dx = 0.0;
};
GridLevel refinement_level(const std::string& problem, int i);

struct ConvergenceTable
{
    std::vector<std::string> components;
    std::vector<GridLevel> levels;
    std::vector<std::vector<double>> errors;  ///< [level][component]
    std::vector<std::vector<double>> eoc;     ///< [level - 1][component]
};

/// Runs every level and measures Bochner errors at the final time.
/// Throws SolverFailure and std::invalid_argument.
ConvergenceTable convergence_study(const RunConfig& config);

/// 17 significant digits, "nan" and "inf" spelled out.
std::string format_number(double value);

void write_invariants_csv(std::ostream& out, const MultisymplecticProblem& problem,
                          const InvariantSeries& series);
void write_convergence_csv(std::ostream& out, const ConvergenceTable& table);

int cmd_run(const RunConfig& config, std::ostream& log);
int cmd_converge(const RunConfig& config, std::ostream& log);

struct PropertyResult
{
    std::string group;
    std::string name;
    bool passed = false;
    double max_residual = 0.0;
    double tolerance = 0.0;
};

/// The verification suite. jump_coefficient != 1 corrupts the flux of G in
/// the operator identity checks, so that the suite can be shown to catch it.
std::vector<PropertyResult> verify_suite(unsigned seed, double jump_coefficient = 1.0);
int cmd_verify(unsigned seed, std::ostream& log, double jump_coefficient = 1.0);

} // namespace mspde
