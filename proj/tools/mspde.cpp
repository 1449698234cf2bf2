#include "mspde/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace mspde;

int main(int argc, char** argv)
{
    CLI::App app{"Space-time finite element solver for periodic multisymplectic PDEs"};
    app.require_subcommand(1);

    std::string problem, variant, out, config_file;
    int q = 0, p = 1, imin = 2, imax = 5;
    double dt = 0.0, dx = 0.0, final_time = 0.0;
    unsigned seed = 1;
    double jump_coefficient = 1.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--problem", problem, "linear-wave, nonlinear-wave or nls");
        cmd->add_option("--variant", variant, "cg, cg-momentum or dg");
        cmd->add_option("--q", q, "temporal degree (trial degree is q+1)");
        cmd->add_option("--p", p, "spatial degree");
        cmd->add_option("--dt", dt, "slab length");
        cmd->add_option("--dx", dx, "element length");
        cmd->add_option("--T", final_time, "final time");
        cmd->add_option("--out", out, "output directory");
        cmd->add_option("--seed", seed, "seed for randomised checks");
        cmd->add_option("--config", config_file, "key=value file; flags take precedence");
    };

    CLI::App* run = app.add_subcommand("run", "single simulation, writes invariants.csv and laws.csv");
    add_common(run);
    CLI::App* converge = app.add_subcommand("converge", "refinement study, writes converge.csv");
    add_common(converge);
    converge->add_option("--imin", imin, "first refinement level");
    converge->add_option("--imax", imax, "last refinement level");
    CLI::App* verify = app.add_subcommand("verify", "operator and property checks");
    verify->add_option("--seed", seed, "seed for randomised checks");
    verify->add_option("--inject-jump-fault", jump_coefficient,
                       "scale the jump term of G (1 is the correct operator)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalidConfig;
    }

    if (verify->parsed())
        return cmd_verify(seed, std::cout, jump_coefficient);

    CLI::App* cmd = run->parsed() ? run : converge;
    RunConfig config;
    try {
        const std::vector<std::pair<std::string, std::string>> flags = {
            {"problem", "--problem"}, {"variant", "--variant"}, {"q", "--q"},
            {"p", "--p"},             {"dt", "--dt"},           {"dx", "--dx"},
            {"T", "--T"},             {"out", "--out"},         {"seed", "--seed"},
            {"imin", "--imin"},       {"imax", "--imax"}};
        std::vector<std::string> given;
        for (const auto& [key, flag] : flags) {
            const CLI::Option* opt = cmd->get_option_no_throw(flag);
            if (opt && opt->count() > 0)
                given.push_back(key);
        }
        if (!config_file.empty())
            read_config_file(config, config_file, given);
        for (const auto& [key, flag] : flags) {
            if (std::find(given.begin(), given.end(), key) == given.end())
                continue;
            set_config_value(config, key, cmd->get_option(flag)->as<std::string>());
        }
    } catch (const std::exception& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitInvalidConfig;
    }
    return run->parsed() ? cmd_run(config, std::cout) : cmd_converge(config, std::cout);
}
