// qprop: Green functions, evolved states and transition tables for quadratic
// Schrodinger equations, plus the verification suites.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "qprop/cli/commands.hpp"

namespace {

using namespace qprop::cli;

struct Args {
    std::string config;
    std::string out;
    std::string format;
    int kmax = -1;
    double tol = 0.0;
    std::string suite = "all";
};

RunOptions options(const Args& a, const CLI::App& app) {
    RunOptions o;
    if (!a.out.empty()) o.out = a.out;
    if (!a.format.empty()) o.format = a.format == "json" ? OutputFormat::json : OutputFormat::csv;
    if (app.count("--kmax")) o.kmax = a.kmax;
    if (app.count("--tol")) o.tol = a.tol;
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qprop: closed-form propagators and transition amplitudes"};
    app.require_subcommand(1);
    Args args;

    using Command = int (*)(const ScenarioConfig&, const RunOptions&);
    const std::map<std::string, std::pair<std::string, Command>> commands{
        {"greens", {"write kernel grids K(x, y, t) for each configured time", cmd_greens}},
        {"evolve", {"evolve an initial state to each configured time", cmd_evolve}},
        {"amplitudes", {"transition table c_kn with unitarity defects", cmd_amplitudes}},
        {"probabilities", {"transition probabilities |c_kn|^2", cmd_probabilities}},
        {"bargmann", {"SU(1,1) angles and Bargmann functions", cmd_bargmann}},
        {"nls", {"particular solutions of the nonlinear equation", cmd_nls}},
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, entry] : commands) {
        auto* sub = app.add_subcommand(name, entry.first);
        sub->add_option("-c,--config", args.config, "scenario file")->required();
        sub->add_option("-o,--out", args.out, "output directory");
        sub->add_option("--format", args.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--kmax", args.kmax, "truncation order")->check(CLI::NonNegativeNumber);
        sub->add_option("--tol", args.tol, "tail tolerance")->check(CLI::PositiveNumber);
        subs[name] = sub;
    }
    auto* verify = app.add_subcommand("verify", "run verification suites and print a JSON report");
    std::vector<std::string> suites{"all"};
    for (const auto& s : qprop::verify::suite_names()) suites.push_back(s);
    verify->add_option("-s,--suite", args.suite, "suite name")->check(CLI::IsMember(suites));
    verify->add_option("-o,--out", args.out, "also write verify.json here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config;
    }

    try {
        if (*verify) {
            RunOptions o;
            if (!args.out.empty()) o.out = args.out;
            return cmd_verify(args.suite, o);
        }
        for (const auto& [name, sub] : subs) {
            if (!*sub) continue;
            const auto cfg = load_config(args.config);
            return commands.at(name).second(cfg, options(args, *sub));
        }
    } catch (const std::exception& e) {
        std::cerr << "qprop: error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return exit_config;
}
