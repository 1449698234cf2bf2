#include "mspde/harness.hpp"

#include "mspde/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

namespace mspde {

SolverConfig RunConfig::solver_config() const
{
    SolverConfig c;
    c.newton_tolerance = newton_tolerance;
    c.max_newton_iterations = max_newton_iterations;
    c.q = q;
    c.p = p;
    c.dt = dt.value_or(0.1);
    c.dx = dx.value_or(problem == "nls" ? 0.4 : 0.05);
    c.final_time = final_time;
    return c;
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size() || value.empty())
        throw std::invalid_argument("bad number for '" + key + "': " + value);
    return v;
}

int parse_int(const std::string& key, const std::string& value)
{
    const double v = parse_double(key, value);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        throw std::invalid_argument("bad integer for '" + key + "': " + value);
    return static_cast<int>(v);
}

} // namespace

void set_config_value(RunConfig& config, const std::string& key, const std::string& value)
{
    if (key == "problem") {
        problem_by_label(value);
        config.problem = value;
    } else if (key == "variant") {
        config.variant = scheme_from_string(value);
    } else if (key == "q") {
        config.q = parse_int(key, value);
    } else if (key == "p") {
        config.p = parse_int(key, value);
    } else if (key == "dt") {
        config.dt = parse_double(key, value);
    } else if (key == "dx") {
        config.dx = parse_double(key, value);
    } else if (key == "imin") {
        config.imin = parse_int(key, value);
    } else if (key == "imax") {
        config.imax = parse_int(key, value);
    } else if (key == "T") {
        config.final_time = parse_double(key, value);
    } else if (key == "out") {
        config.out = value;
    } else if (key == "seed") {
        const int s = parse_int(key, value);
        if (s < 0)
            throw std::invalid_argument("seed must be non-negative");
        config.seed = static_cast<unsigned>(s);
    } else if (key == "tol") {
        config.newton_tolerance = parse_double(key, value);
    } else if (key == "maxit") {
        config.max_newton_iterations = parse_int(key, value);
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

void read_config_file(RunConfig& config, const std::string& path,
                      const std::vector<std::string>& skip)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        if (std::find(skip.begin(), skip.end(), key) != skip.end())
            continue;
        set_config_value(config, key, trim(line.substr(eq + 1)));
    }
}

GridLevel refinement_level(const std::string& problem, int i)
{
    GridLevel g;
    g.i = i;
    if (problem == "nls") {
        g.dt = 0.1 * std::ldexp(1.0, 1 - i);
        g.dx = 0.4 * std::ldexp(1.0, 1 - i);
    } else {
        g.dt = g.dx = std::ldexp(1.0, -i);
    }
    g.h = g.dt;
    return g;
}

ConvergenceTable convergence_study(const RunConfig& config)
{
    if (config.imin > config.imax)
        throw std::invalid_argument("imin must not exceed imax");
    const MultisymplecticProblem problem = problem_by_label(config.problem);
    if (!problem.exact_solution)
        throw std::invalid_argument("problem '" + config.problem + "' has no exact solution");

    ConvergenceTable table;
    table.components = problem.component_names;
    for (int i = config.imin; i <= config.imax; ++i) {
        const GridLevel level = refinement_level(config.problem, i);
        RunConfig rc = config;
        rc.dt = level.dt;
        rc.dx = level.dx;
        const Trajectory tr = run_simulation(config.variant, problem, rc.solver_config());
        const TrajectoryFields fields(problem, tr);
        table.levels.push_back(level);
        table.errors.push_back(bochner_error(fields));
    }
    const int D = problem.dimension;
    table.eoc.assign(std::max<std::size_t>(table.levels.size(), 1) - 1, std::vector<double>(D));
    for (int c = 0; c < D; ++c) {
        std::vector<double> e, h;
        for (std::size_t l = 0; l < table.levels.size(); ++l) {
            e.push_back(table.errors[l][c]);
            h.push_back(table.levels[l].h);
        }
        if (e.size() < 2)
            continue;
        const std::vector<double> rates = eoc(e, h);
        for (std::size_t l = 0; l < rates.size(); ++l)
            table.eoc[l][c] = rates[l];
    }
    return table;
}

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_invariants_csv(std::ostream& out, const MultisymplecticProblem& problem,
                          const InvariantSeries& series)
{
    out << "t";
    for (const auto& name : problem.component_names)
        out << ",mass_" << name;
    out << ",momentum,energy";
    for (const auto& name : problem.component_names)
        out << ",dev_mass_" << name;
    out << ",dev_momentum,dev_energy\n";

    std::vector<std::vector<double>> dev_mass;
    for (int c = 0; c < problem.dimension; ++c)
        dev_mass.push_back(series.dev_mass(c));
    const auto dev_m = series.dev_momentum();
    const auto dev_e = series.dev_energy();
    for (std::size_t n = 0; n < series.times.size(); ++n) {
        out << format_number(series.times[n]);
        for (int c = 0; c < problem.dimension; ++c)
            out << ',' << format_number(series.mass[c][n]);
        out << ',' << format_number(series.momentum[n]) << ',' << format_number(series.energy[n]);
        for (int c = 0; c < problem.dimension; ++c)
            out << ',' << format_number(dev_mass[c][n]);
        out << ',' << format_number(dev_m[n]) << ',' << format_number(dev_e[n]) << '\n';
    }
}

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table)
{
    out << "i,h";
    for (const auto& name : table.components)
        out << ",e_" << name;
    for (const auto& name : table.components)
        out << ",eoc_" << name;
    out << '\n';
    for (std::size_t l = 0; l < table.levels.size(); ++l) {
        out << table.levels[l].i << ',' << format_number(table.levels[l].h);
        for (double e : table.errors[l])
            out << ',' << format_number(e);
        for (std::size_t c = 0; c < table.components.size(); ++c)
            out << ',' << (l == 0 ? std::string() : format_number(table.eoc[l - 1][c]));
        out << '\n';
    }
}

namespace {

std::ofstream open_output(const std::string& dir, const std::string& name)
{
    std::filesystem::create_directories(dir);
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    return out;
}

void write_laws_csv(std::ostream& out, const TrajectoryFields& fields,
                    const InvariantSeries& series)
{
    const Trajectory& tr = fields.trajectory();
    const std::vector<SlabLaw> laws = slab_laws(fields, series);
    out << "slab,t_start,t_end,energy_change,momentum_change,w_integral,momentum_residual,"
           "newton_iterations,newton_residual,local_energy_max,local_momentum_max\n";
    for (int n = 0; n < tr.slab_count(); ++n) {
        const SlabLaw& l = laws[n];
        out << n << ',' << format_number(tr.times[n]) << ',' << format_number(tr.times[n + 1])
            << ',' << format_number(l.energy_change) << ',' << format_number(l.momentum_change)
            << ',' << format_number(l.w_integral) << ',' << format_number(l.momentum_residual)
            << ',' << tr.newton[n].iterations << ',' << format_number(tr.newton[n].residual);
        if (fields.discontinuous()) {
            double le = 0.0, lm = 0.0;
            for (int m = 0; m < fields.space().element_count(); ++m) {
                const LocalResidual r = local_conservation_residuals(fields, n, m);
                le = std::max(le, std::abs(r.energy));
                lm = std::max(lm, std::abs(r.momentum));
            }
            out << ',' << format_number(le) << ',' << format_number(lm);
        } else {
            out << ",,";
        }
        out << '\n';
    }
}

} // namespace

int cmd_run(const RunConfig& config, std::ostream& log)
{
    MultisymplecticProblem problem;
    std::optional<Simulator> sim;
    try {
        problem = problem_by_label(config.problem);
        sim.emplace(config.variant, problem, config.solver_config());
    } catch (const std::invalid_argument& e) {
        log << "invalid configuration: " << e.what() << '\n';
        return kExitInvalidConfig;
    }

    std::optional<SolverFailure> failure;
    try {
        sim->run();
    } catch (const SolverFailure& f) {
        failure = f;
    }

    const TrajectoryFields fields(problem, sim->trajectory());
    const InvariantSeries series = global_invariants(fields);
    {
        std::ofstream out = open_output(config.out, "invariants.csv");
        write_invariants_csv(out, problem, series);
        if (failure) {
            out << "failure,slab=" << failure->slab()
                << ",residual=" << format_number(failure->residual());
            const int columns = 3 + 2 * problem.dimension + 2;
            for (int c = 3; c < columns; ++c)
                out << ',';
            out << '\n';
        }
    }
    {
        std::ofstream out = open_output(config.out, "laws.csv");
        write_laws_csv(out, fields, series);
    }

    log << "problem " << problem.label << ", variant " << to_string(config.variant) << ", q "
        << config.q << ", p " << config.p << ", slabs " << sim->slabs_done() << "/"
        << sim->total_slabs() << '\n';
    log << "max dev_momentum " << format_number(max_abs(series.dev_momentum()))
        << "\nmax dev_energy " << format_number(max_abs(series.dev_energy())) << '\n';
    if (failure) {
        log << "solver failure: " << failure->what() << '\n';
        return kExitSolverFailure;
    }
    return kExitSuccess;
}

int cmd_converge(const RunConfig& config, std::ostream& log)
{
    ConvergenceTable table;
    try {
        table = convergence_study(config);
    } catch (const SolverFailure& f) {
        log << "solver failure: " << f.what() << '\n';
        return kExitSolverFailure;
    } catch (const std::invalid_argument& e) {
        log << "invalid configuration: " << e.what() << '\n';
        return kExitInvalidConfig;
    }
    std::ofstream out = open_output(config.out, "converge.csv");
    write_convergence_csv(out, table);
    write_convergence_csv(log, table);
    return kExitSuccess;
}

// ---------------------------------------------------------------------------
// Verification suite

namespace {

using Check = std::vector<PropertyResult>;

void record(Check& out, const std::string& group, const std::string& name, double residual,
            double tol)
{
    out.push_back({group, name, std::isfinite(residual) && residual <= tol, residual, tol});
}

Vector random_vector(std::mt19937& rng, int n)
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vector v(n);
    for (int i = 0; i < n; ++i)
        v[i] = dist(rng);
    return v;
}

void check_quadrature(Check& out)
{
    double worst = 0.0;
    for (int n = 1; n <= kCappedQuadraturePoints; ++n) {
        const QuadratureRule rule = gauss_legendre(n);
        for (int d = 0; d <= 2 * n - 1; ++d)
            worst = std::max(worst, std::abs(rule.integrate([d](double x) {
                                                  return std::pow(x, d);
                                              }) -
                                              1.0 / (d + 1)));
    }
    record(out, "quadrature", "gauss rules integrate monomials to degree 2n-1", worst, 1e-14);
}

void check_basis(Check& out, std::mt19937& rng)
{
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    double unity = 0.0;
    double nodal = 0.0;
    for (int r = 0; r <= 4; ++r) {
        const LagrangeBasis b(r);
        for (int s = 0; s < 20; ++s) {
            const double x = dist(rng);
            double sum = 0.0, dsum = 0.0;
            for (int j = 0; j < b.size(); ++j) {
                sum += b.eval(j, x);
                dsum += b.eval(j, x, 1);
            }
            unity = std::max({unity, std::abs(sum - 1.0), std::abs(dsum)});
        }
        for (int i = 0; i < b.size(); ++i)
            for (int j = 0; j < b.size(); ++j)
                nodal = std::max(nodal, std::abs(b.eval(j, b.nodes()[i]) - (i == j ? 1.0 : 0.0)));
    }
    record(out, "basis", "partition of unity", unity, 1e-12);
    record(out, "basis", "nodal interpolation", nodal, 1e-13);
}

void check_mass(Check& out)
{
    const int M = 8;
    const double h = 1.0 / M;
    const SpatialSpace cg(Partition1D::uniform(1.0, M, true), 1, Continuity::Continuous);
    const Matrix mass = Matrix(cg.mass_matrix());
    double worst = 0.0;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            const int d = std::min((i - j + M) % M, (j - i + M) % M);
            const double expected = d == 0 ? 2.0 * h / 3.0 : (d == 1 ? h / 6.0 : 0.0);
            worst = std::max(worst, std::abs(mass(i, j) - expected));
        }
    record(out, "mass", "periodic CG p=1 mass matrix is circulant(2h/3, h/6)", worst, 1e-15);
}

void check_problems(Check& out, unsigned seed)
{
    for (const char* label : {"linear-wave", "nonlinear-wave", "nls"}) {
        const ValidationReport r = validate(problem_by_label(label), seed);
        for (const ValidationCheck& c : r.checks)
            out.push_back({"problem", std::string(label) + ": " + c.name, c.passed,
                           c.max_residual, c.tolerance});
    }
}

void check_g(Check& out, std::mt19937& rng, double jc)
{
    double orth = 0.0, skew = 0.0, prod = 0.0;
    double lorth = 0.0, lskew = 0.0, lprod = 0.0;
    const int D = 2;
    for (int p = 1; p <= 3; ++p)
        for (int M : {4, 8}) {
            const SpatialSpace space(Partition1D::uniform(1.0, M, true), p,
                                     Continuity::Discontinuous);
            const DerivativeOperator g(space, jc);
            const int n = space.dof_count();
            const Vector ones = Vector::Ones(D * n);
            for (int s = 0; s < 50; ++s) {
                const Vector u = random_vector(rng, D * n);
                const Vector v = random_vector(rng, D * n);
                const Vector gu = g.apply(u, D);
                const Vector gv = g.apply(v, D);
                orth = std::max(orth, std::abs(inner(space, gu, ones, D)));
                skew = std::max(skew, std::abs(inner(space, gu, v, D) + inner(space, u, gv, D)));
                auto [pspace, w] = product_field(space, u, v, D);
                const DerivativeOperator gp(pspace, jc);
                const double lhs = inner(pspace, gp.apply(w), Vector::Ones(pspace.dof_count()), 1);
                prod = std::max(prod, std::abs(lhs - inner(space, gu, v, D) - inner(space, u, gv, D)));
                for (int m = 0; m < M; ++m) {
                    lorth = std::max(lorth, std::abs(local_orthogonality_residual(g, u, D, m)));
                    lskew = std::max(lskew, std::abs(local_skew_residual(g, u, v, D, m)));
                    lprod = std::max(lprod, std::abs(local_product_residual(g, u, v, D, m)));
                }
            }
        }
    record(out, "g-global", "int G(U).1 = 0", orth, 1e-12);
    record(out, "g-global", "int G(U).V = -int U.G(V)", skew, 1e-12);
    record(out, "g-global", "int G(U.V) = int G(U).V + U.G(V)", prod, 1e-12);
    record(out, "g-local", "element orthogonality", lorth, 1e-12);
    record(out, "g-local", "element skew identity", lskew, 1e-12);
    record(out, "g-local", "element product rule", lprod, 1e-12);
}

SlabCoefficients random_slab(std::mt19937& rng, const SlabSystem& sys, int D, double scale)
{
    const int n = sys.trial_space().dof_count();
    SlabCoefficients z(D, n, sys.q() + 2);
    z.values() = scale * random_vector(rng, static_cast<int>(z.values().size()));
    return z;
}

// Max |J - J_fd| / max(1, max |J|) with central differences.
double jacobian_error(SlabSystem& sys, const SlabCoefficients& z0, int D)
{
    const Matrix j = Matrix(sys.jacobian(z0));
    const int n = sys.trial_space().dof_count();
    const double step = 1e-6;
    double worst = 0.0;
    for (int c = 0; c < D; ++c)
        for (int i = 0; i < n; ++i)
            for (int k = 1; k <= sys.q() + 1; ++k) {
                SlabCoefficients zp = z0, zm = z0;
                zp(c, i, k) += step;
                zm(c, i, k) -= step;
                const Vector col = (sys.residual(zp) - sys.residual(zm)) / (2.0 * step);
                worst = std::max(worst,
                                 (col - j.col(sys.unknown_index(c, i, k))).cwiseAbs().maxCoeff());
            }
    return worst / std::max(1.0, j.cwiseAbs().maxCoeff());
}

void check_jacobians(Check& out, std::mt19937& rng)
{
    for (const char* label : {"nonlinear-wave", "nls"}) {
        const MultisymplecticProblem problem = problem_by_label(label);
        for (Scheme s : {Scheme::CgPrimary, Scheme::CgMomentum, Scheme::DgPrimary}) {
            const double dx = problem.domain_length / 4;
            SlabSystem sys(s, problem, make_space(s, problem, 2, dx), 1, 0.1);
            const SlabCoefficients z = random_slab(rng, sys, problem.dimension, 1.0);
            record(out, "jacobian",
                   std::string(label) + " " + to_string(s) + " vs finite differences",
                   jacobian_error(sys, z, problem.dimension), 1e-5);
        }
    }
    const MultisymplecticProblem lw = linear_wave();
    double worst = 0.0;
    for (Scheme s : {Scheme::CgPrimary, Scheme::CgMomentum, Scheme::DgPrimary}) {
        SlabSystem sys(s, lw, make_space(s, lw, 2, 0.25), 1, 0.1);
        const Matrix a = Matrix(sys.jacobian(random_slab(rng, sys, 3, 1.0)));
        const Matrix b = Matrix(sys.jacobian(random_slab(rng, sys, 3, 1.0)));
        worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
    }
    record(out, "jacobian", "linear-wave Jacobian independent of the state", worst, 1e-13);
}

void check_newton(Check& out)
{
    const MultisymplecticProblem lw = linear_wave();
    SolverConfig c;
    c.q = 1;
    c.p = 2;
    c.dt = 0.125;
    c.dx = 0.125;
    c.final_time = 0.5;
    int worst = 0;
    for (Scheme s : {Scheme::CgPrimary, Scheme::CgMomentum, Scheme::DgPrimary}) {
        const Trajectory tr = run_simulation(s, lw, c);
        for (const NewtonReport& r : tr.newton)
            worst = std::max(worst, r.iterations);
    }
    record(out, "newton", "linear-wave slabs solve in one iteration", worst - 1, 0.0);

    SolverConfig f = c;
    f.max_newton_iterations = 1;
    f.dt = 0.1;
    f.dx = 0.05;
    f.final_time = 0.1;
    double caught = 1.0;
    try {
        run_simulation(Scheme::CgPrimary, nonlinear_wave(), f);
    } catch (const SolverFailure& e) {
        caught = e.residual() > 0.0 && e.slab() == 0 ? 0.0 : 1.0;
    }
    record(out, "newton", "max_newton_iterations=1 on nonlinear-wave raises a solver failure",
           caught, 0.0);
}

void check_steady(Check& out)
{
    MultisymplecticProblem lw = linear_wave();
    lw.initial_condition = [](double) {
        State s(3);
        s << 1.0, 0.0, 0.0;
        return s;
    };
    SolverConfig c;
    c.q = 1;
    c.p = 2;
    c.dt = 0.1;
    c.dx = 0.125;
    c.final_time = 2.0;
    for (Scheme s : {Scheme::CgPrimary, Scheme::CgMomentum, Scheme::DgPrimary}) {
        const Trajectory tr = run_simulation(s, lw, c);
        double worst = 0.0;
        for (int n = 0; n <= tr.slab_count(); ++n)
            worst = std::max(worst, (tr.node_state(n) - tr.initial_state).cwiseAbs().maxCoeff());
        record(out, "steady-state", to_string(s) + " keeps (1,0,0) fixed", worst, 1e-12);
    }
}

void check_conservation(Check& out)
{
    SolverConfig c;
    c.q = 1;
    c.p = 2;
    c.dt = 0.125;
    c.dx = 0.125;
    c.final_time = 1.0;
    const MultisymplecticProblem lw = linear_wave();
    for (Scheme s : {Scheme::CgPrimary, Scheme::DgPrimary}) {
        const Trajectory tr = run_simulation(s, lw, c);
        const TrajectoryFields f(lw, tr);
        const InvariantSeries series = global_invariants(f);
        record(out, "conservation", "linear-wave " + to_string(s) + " energy",
               max_abs(series.dev_energy()), 1e-10);
        record(out, "conservation", "linear-wave " + to_string(s) + " momentum",
               max_abs(series.dev_momentum()), 1e-10);
    }

    const MultisymplecticProblem nw = nonlinear_wave();
    c.dt = 0.1;
    c.dx = 0.1;
    for (Scheme s : {Scheme::CgPrimary, Scheme::DgPrimary}) {
        const Trajectory tr = run_simulation(s, nw, c);
        const TrajectoryFields f(nw, tr);
        const InvariantSeries series = global_invariants(f);
        record(out, "conservation", "nonlinear-wave " + to_string(s) + " energy",
               max_abs(series.dev_energy()), 1e-9);
        double law = 0.0;
        for (const SlabLaw& l : slab_laws(f, series))
            law = std::max(law, std::abs(l.momentum_residual));
        record(out, "momentum-law", "nonlinear-wave " + to_string(s) + " consistent momentum law",
               law, 1e-9);
        record(out, "auxiliary", "nonlinear-wave " + to_string(s) + " W equals D U at Gauss times",
               auxiliary_identity_residual(f), 1e-10);
        record(out, "stability", "nonlinear-wave " + to_string(s) + " energy bound slack",
               std::max(0.0, stability_monitor(f).max_slack()), 1e-8);
    }

    const MultisymplecticProblem nl = nls();
    SolverConfig d = c;
    d.q = 1;
    d.p = 2;
    d.dx = 0.4;
    d.final_time = 0.3;
    const Trajectory tr = run_simulation(Scheme::DgPrimary, nl, d);
    const TrajectoryFields f(nl, tr);
    double le = 0.0, lm = 0.0;
    for (int n = 0; n < tr.slab_count(); ++n)
        for (int m = 0; m < f.space().element_count(); ++m) {
            const LocalResidual r = local_conservation_residuals(f, n, m);
            le = std::max(le, std::abs(r.energy));
            lm = std::max(lm, std::abs(r.momentum));
        }
    record(out, "local-laws", "nls dg element energy law", le, 1e-10);
    record(out, "local-laws", "nls dg element momentum law", lm, 1e-10);
}

void check_densities(Check& out, std::mt19937& rng)
{
    const MultisymplecticProblem nl = nls();
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
        const State z = random_vector(rng, 4);
        const State zt = random_vector(rng, 4);
        worst = std::max(worst, std::abs(z.dot(nl.K * zt) + zt.dot(nl.K * z)));
    }
    record(out, "densities", "K z . z_t = -z . K z_t", worst, 1e-14);

    // Harmonic wave at t = 0: int (1/2 z.L z_x - S) dx = -pi^2/2.
    const MultisymplecticProblem lw = linear_wave();
    const QuadratureRule rule = policy_rule(-1);
    const double pi = std::numbers::pi;
    double e = 0.0;
    const int M = 16;
    for (int m = 0; m < M; ++m)
        for (std::size_t b = 0; b < rule.size(); ++b) {
            const double x = (m + rule.points[b]) / M;
            State z(3), dz(3);
            const double ph = 2.0 * pi * x;
            z << 0.5 * std::sin(ph), pi * std::cos(ph), pi * std::cos(ph);
            dz << pi * std::cos(ph), -2.0 * pi * pi * std::sin(ph), -2.0 * pi * pi * std::sin(ph);
            e += rule.weights[b] / M * densities_fluxes(lw, z, dz, State::Zero(3)).energy_density;
        }
    record(out, "densities", "linear-wave energy of the exact data is -pi^2/2",
           std::abs(e + pi * pi / 2.0), 1e-12);
}

void check_eoc(Check& out)
{
    double worst = 0.0;
    worst = std::max(worst, std::abs(eoc({1.0, 0.25}, {1.0, 0.5})[0] - 2.0));
    worst = std::max(worst, std::abs(eoc({1.0, 1.0}, {1.0, 0.5})[0]));
    worst = std::max(worst, std::abs(eoc({1e-2, 1.25e-3}, {0.5, 0.25})[0] - 3.0));
    const bool marker = std::isnan(eoc({1.0, 0.0}, {1.0, 0.5})[0]);
    record(out, "eoc", "closed-form rates", worst, 1e-12);
    record(out, "eoc", "zero error gives an undefined entry", marker ? 0.0 : 1.0, 0.0);
}

} // namespace

std::vector<PropertyResult> verify_suite(unsigned seed, double jump_coefficient)
{
    std::mt19937 rng(seed);
    Check out;
    check_quadrature(out);
    check_basis(out, rng);
    check_mass(out);
    check_problems(out, seed);
    check_g(out, rng, jump_coefficient);
    check_jacobians(out, rng);
    check_newton(out);
    check_steady(out);
    check_conservation(out);
    check_densities(out, rng);
    check_eoc(out);
    return out;
}

int cmd_verify(unsigned seed, std::ostream& log, double jump_coefficient)
{
    const std::vector<PropertyResult> results = verify_suite(seed, jump_coefficient);
    std::vector<std::string> groups;
    bool ok = true;
    for (const PropertyResult& r : results) {
        if (std::find(groups.begin(), groups.end(), r.group) == groups.end())
            groups.push_back(r.group);
        ok = ok && r.passed;
        log << (r.passed ? "PASS " : "FAIL ") << r.group << ": " << r.name << "  max residual "
            << format_number(r.max_residual) << " (tol " << format_number(r.tolerance) << ")\n";
    }
    log << results.size() << " properties in " << groups.size() << " groups, "
        << (ok ? "all passed" : "FAILURES") << '\n';
    return ok ? kExitSuccess : kExitSolverFailure;
}

} // namespace mspde
