#pragma once

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "../amplitudes.hpp"
#include "../classical.hpp"
#include "../coeffs.hpp"
#include "../evolve.hpp"
#include "../oracle.hpp"
#include "../propagator.hpp"
#include "../specfun.hpp"
#include "../verify.hpp"
#include "config.hpp"
#include "io.hpp"

namespace qprop::cli {

using ojson = nlohmann::ordered_json;

enum ExitCode { exit_ok = 0, exit_config = 1, exit_domain = 2, exit_verify = 3 };

struct RunOptions {
    std::optional<std::filesystem::path> out;
    std::optional<OutputFormat> format;
    std::optional<int> kmax;
    std::optional<double> tol;
    std::ostream* log = &std::cout;
};

// --out, then QPROP_OUT_DIR, then [output] dir, then the working directory.
inline std::filesystem::path resolve_out_dir(const RunOptions& opt, const ScenarioConfig* cfg) {
    if (opt.out) return *opt.out;
    if (const char* env = std::getenv("QPROP_OUT_DIR"); env && *env) return env;
    if (cfg && !cfg->out_dir.empty()) return cfg->out_dir;
    return ".";
}

struct Columns {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// CSV: header line then one row per line. JSON: {"columns": [...], "rows": [[...], ...]}.
class Artifacts {
public:
    Artifacts(std::filesystem::path dir, std::string prefix, OutputFormat format)
        : dir_(std::move(dir)), prefix_(std::move(prefix)), format_(format) {}

    std::filesystem::path table(const std::string& name, const Columns& c) {
        if (format_ == OutputFormat::csv) {
            CsvWriter w(c.header);
            for (const auto& r : c.rows) w.row(r);
            return write(name + ".csv", w.str());
        }
        ojson j;
        j["columns"] = c.header;
        j["rows"] = c.rows;
        return write(name + ".json", j.dump() + "\n");
    }

    std::filesystem::path json(const std::string& name, const ojson& j) { return write(name + ".json", j.dump() + "\n"); }

    const std::vector<std::filesystem::path>& written() const { return written_; }
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path write(const std::string& file, const std::string& content) {
        const auto p = dir_ / (prefix_ + file);
        atomic_write(p, content);
        written_.push_back(p);
        return p;
    }

    std::filesystem::path dir_;
    std::string prefix_;
    OutputFormat format_;
    std::vector<std::filesystem::path> written_;
};

namespace detail {

inline Artifacts artifacts(const ScenarioConfig& cfg, const RunOptions& opt) {
    return Artifacts(resolve_out_dir(opt, &cfg), cfg.prefix, opt.format.value_or(cfg.format));
}

inline std::string time_tag(double t) { return "_t" + format_double(t); }

[[noreturn]] inline void unsupported(const char* command, const ScenarioConfig& cfg) {
    throw ConfigError(std::string(command) + " does not apply to scenario kind '" + to_string(cfg.kind) + "'");
}

inline OscillatorSolution solve_general(const ScenarioConfig& cfg, double t_end) {
    return solve_oscillator(*cfg.profile, cfg.osc.m, cfg.osc.hbar, t_end);
}

inline double max_time(const std::vector<double>& times) {
    double m = 0.0;
    for (double t : times) m = std::max(m, t);
    return m;
}

// Kernel coefficients at the terminal time for the amplitude commands.
inline QuadraticPhase terminal_phase(const ScenarioConfig& cfg) {
    if (cfg.kind == ScenarioKind::oscillator) return oscillator_phase(cfg.osc, cfg.osc.T);
    const auto sol = solve_general(cfg, cfg.osc.T);
    return general_oscillator_coeffs(sol, cfg.osc.T, cfg.gamma_method);
}

inline ojson params_json(const OscillatorConfig& p, bool with_T) {
    ojson j;
    j["m"] = p.m;
    j["hbar"] = p.hbar;
    j["omega0"] = p.omega0;
    j["omega1"] = p.omega1;
    if (with_T) j["T"] = p.T;
    return j;
}

inline ojson phase_json(const QuadraticPhase& q) {
    return ojson{{"t", q.t}, {"mu", q.mu}, {"alpha", q.alpha}, {"beta", q.beta}, {"gamma", q.gamma}};
}

inline ojson finite_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

inline Columns mu_columns(const ClassicalSolution& mu) {
    Columns c{{"t", "mu", "dmu"}, {}};
    for (std::size_t i = 0; i < mu.t().size(); ++i) c.rows.push_back({mu.t()[i], mu.mu()[i], mu.dmu()[i]});
    return c;
}

}  // namespace detail

inline int cmd_greens(const ScenarioConfig& cfg, const RunOptions& opt) {
    const auto xs = cfg.grid.xs(), ys = cfg.grid.ys();
    std::vector<QuadraticPhase> phases;
    double s = 1.0;
    std::optional<OscillatorSolution> sol;
    switch (cfg.kind) {
        case ScenarioKind::variant:
            for (double t : cfg.times)
                phases.push_back(cfg.general_kernel
                                     ? general_coeffs(cfg.equation, cfg.c1, cfg.c2, cfg.beta0, cfg.gamma0, t)
                                     : green_coeffs(cfg.equation, t));
            break;
        case ScenarioKind::oscillator:
            s = cfg.osc.m / (2.0 * cfg.osc.hbar);
            for (double t : cfg.times) phases.push_back(oscillator_phase(cfg.osc, t));
            break;
        case ScenarioKind::general:
            s = cfg.osc.m / (2.0 * cfg.osc.hbar);
            if (!(detail::max_time(cfg.times) > 0.0)) throw DomainError("greens: times must be positive");
            sol = detail::solve_general(cfg, detail::max_time(cfg.times));
            for (double t : cfg.times) phases.push_back(general_oscillator_coeffs(*sol, t, cfg.gamma_method));
            break;
        default:
            detail::unsupported("greens", cfg);
    }

    auto out = detail::artifacts(cfg, opt);
    for (const auto& q : phases) {
        Columns c{{"x", "y", "re", "im"}, {}};
        c.rows.reserve(xs.size() * ys.size());
        for (double y : ys)
            for (double x : xs) {
                const cplx k = quadratic_kernel(q, x, y, s);
                c.rows.push_back({x, y, k.real(), k.imag()});
            }
        out.table("greens" + detail::time_tag(q.t == 0.0 ? 0.0 : q.t), c);
    }
    if (cfg.kind == ScenarioKind::variant) {
        Columns c{{"t", "a", "b", "da", "db"}, {}};
        for (double t : cfg.times) {
            const auto p = airy_pair(t);
            c.rows.push_back({t, p.a, p.b, p.da, p.db});
        }
        out.table("airy_pair", c);
    }
    if (sol) out.table("mu", detail::mu_columns(sol->mu));
    *opt.log << "greens: " << phases.size() << " time(s), " << xs.size() << "x" << ys.size() << " grid, "
             << out.written().size() << " file(s) in " << out.dir().string() << "\n";
    return exit_ok;
}

inline int cmd_evolve(const ScenarioConfig& cfg, const RunOptions& opt) {
    const auto& ev = cfg.evolve;
    std::vector<GridWaveFunction> states;
    std::optional<OscillatorSolution> sol;
    if (cfg.kind == ScenarioKind::variant) {
        if (ev.method != EvolveMethod::cauchy) throw ConfigError("evolve: equation variants support method = cauchy only");
        const double norm = std::pow(std::numbers::pi * ev.sigma * ev.sigma, -0.25);
        const auto phi = GridWaveFunction::sample(
            [&](double x) { return cplx(norm * std::exp(-0.5 * std::pow((x - ev.x0) / ev.sigma, 2))); },
            ev.x0 - ev.half_width, ev.x0 + ev.half_width, static_cast<std::size_t>(ev.points));
        for (double t : cfg.times)
            states.push_back(cfg.equation == EquationVariant::gauge ? gauge_solve(phi, t)
                                                                    : solve_cauchy(cfg.equation, phi, t));
    } else if (cfg.kind == ScenarioKind::oscillator || cfg.kind == ScenarioKind::general) {
        const auto& p = cfg.osc;
        const double unit = std::sqrt(p.hbar / (p.m * p.omega0));
        const double lo = -ev.half_width * unit, hi = ev.half_width * unit;
        const auto phi = sample_eigenstate(ev.n, p.omega0, p.m, p.hbar, lo, hi, static_cast<std::size_t>(ev.points));
        const bool general = cfg.kind == ScenarioKind::general;
        if (general || ev.method != EvolveMethod::stepper) {
            if (!(detail::max_time(cfg.times) > 0.0)) throw DomainError("evolve: times must be positive");
        }
        if (general && ev.method != EvolveMethod::stepper) sol = detail::solve_general(cfg, detail::max_time(cfg.times));
        const FrequencyProfile profile = general ? *cfg.profile : p.profile();
        GridWaveFunction current = phi;
        for (double t : cfg.times) {
            switch (ev.method) {
                case EvolveMethod::analytic: {
                    const auto q = general ? general_oscillator_coeffs(*sol, t, cfg.gamma_method)
                                           : oscillator_phase(p, t);
                    const auto f = evolve_eigenstate_analytic(ev.n, q, p.omega0, p.m, p.hbar);
                    states.push_back(GridWaveFunction::sample(f, lo, hi, static_cast<std::size_t>(ev.points), t));
                    break;
                }
                case EvolveMethod::cauchy:
                    states.push_back(general ? solve_cauchy(*sol, phi, t, cfg.gamma_method) : solve_cauchy(p, phi, t));
                    break;
                case EvolveMethod::stepper:
                    if (t < current.t) throw ConfigError("evolve: the stepper needs increasing times");
                    current = unitary_stepper(profile, current, t, ev.dt, p.m, p.hbar);
                    states.push_back(current);
                    break;
            }
        }
    } else {
        detail::unsupported("evolve", cfg);
    }

    auto out = detail::artifacts(cfg, opt);
    for (const auto& psi : states) {
        Columns c{{"x", "re", "im"}, {}};
        for (std::size_t i = 0; i < psi.n_points(); ++i) c.rows.push_back({psi.x(i), psi.values[i].real(), psi.values[i].imag()});
        out.table("evolve" + detail::time_tag(psi.t), c);
        *opt.log << "evolve: t = " << format_double(psi.t) << "  norm^2 = " << format_double(psi.norm_sq()) << "\n";
    }
    return exit_ok;
}

inline TableOptions table_options(const ScenarioConfig& cfg, const RunOptions& opt) {
    TableOptions t;
    t.k_min = opt.kmax.value_or(cfg.amplitudes.k_max);
    t.tol = opt.tol.value_or(cfg.amplitudes.tol);
    t.columns_checked = std::min(cfg.amplitudes.columns, t.k_min);
    if (t.k_min < 1) throw ConfigError("--kmax must be at least 1");
    if (!(t.tol > 0.0)) throw ConfigError("--tol must be positive");
    t.k_cap = std::max(t.k_cap, t.k_min);
    return t;
}

inline ojson table_json(const TransitionTable& t, const ScenarioConfig& cfg) {
    ojson j;
    j["kind"] = to_string(cfg.kind);
    j["params"] = detail::params_json(t.params, cfg.kind != ScenarioKind::sudden);
    if (cfg.kind != ScenarioKind::sudden) j["phase"] = detail::phase_json(t.phase);
    j["K_max"] = t.K_max;
    j["zeta"] = detail::finite_or_null(t.zeta);
    j["ratio"] = t.ratio;
    j["tail_bound"] = t.tail_bound;
    j["unitarity_defect"] = t.unitarity_defect;
    ojson rows = ojson::array();
    for (int k = 0; k <= t.K_max; ++k) {
        ojson row = ojson::array();
        for (int n = 0; n <= t.K_max; ++n) row.push_back({t.at(k, n).real(), t.at(k, n).imag()});
        rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
    return j;
}

inline int cmd_amplitudes(const ScenarioConfig& cfg, const RunOptions& opt) {
    const auto topt = table_options(cfg, opt);
    TransitionTable table;
    switch (cfg.kind) {
        case ScenarioKind::oscillator:
            table = transition_table(cfg.osc, topt);
            break;
        case ScenarioKind::general:
            table = transition_table(detail::terminal_phase(cfg), cfg.osc, topt);
            break;
        case ScenarioKind::sudden:
            table = sudden_table(cfg.osc.omega0, cfg.osc.omega1, topt);
            break;
        default:
            detail::unsupported("amplitudes", cfg);
    }
    auto out = detail::artifacts(cfg, opt);
    out.json("amplitudes", table_json(table, cfg));
    Columns c{{"k", "n", "abs2"}, {}};
    for (int k = 0; k <= table.K_max; ++k)
        for (int n = 0; n <= table.K_max; ++n) c.rows.push_back({double(k), double(n), std::norm(table.at(k, n))});
    out.table("amplitudes_abs2", c);
    *opt.log << "amplitudes: K_max = " << table.K_max << ", tail bound " << format_double(table.tail_bound) << "\n";
    for (int n = 0; n <= std::min(4, table.K_max); ++n)
        *opt.log << "  column " << n << ": unitarity defect " << format_double(table.unitarity_defect[n]) << "\n";
    return exit_ok;
}

inline int cmd_probabilities(const ScenarioConfig& cfg, const RunOptions& opt) {
    const int K = opt.kmax.value_or(cfg.amplitudes.k_max);
    if (K < 0) throw ConfigError("--kmax must be nonnegative");
    double ratio = 0.0;
    switch (cfg.kind) {
        case ScenarioKind::oscillator:
        case ScenarioKind::general: {
            const auto q = detail::terminal_phase(cfg);
            ratio = transition_invariants(q, cfg.osc.omega0, cfg.osc.omega1).ratio;
            break;
        }
        case ScenarioKind::sudden:
            if (cfg.osc.omega0 == cfg.osc.omega1) throw DegenerateError("sudden: omega0 == omega1");
            ratio = sudden_ratio(cfg.osc.omega0, cfg.osc.omega1);
            break;
        default:
            detail::unsupported("probabilities", cfg);
    }
    Columns c{{"k", "n", "p"}, {}};
    std::vector<double> column(static_cast<std::size_t>(K) + 1, 0.0);
    for (int k = 0; k <= K; ++k)
        for (int n = 0; n <= K; ++n) {
            const double p = probability_from_ratio(k, n, ratio);
            column[n] += p;
            c.rows.push_back({double(k), double(n), p});
        }
    auto out = detail::artifacts(cfg, opt);
    out.table("probabilities", c);
    *opt.log << "probabilities: R = " << format_double(ratio) << ", K = " << K << "\n";
    for (int n = 0; n <= std::min(4, K); ++n)
        *opt.log << "  column " << n << ": sum " << format_double(column[n]) << "\n";
    return exit_ok;
}

inline int cmd_bargmann(const ScenarioConfig& cfg, const RunOptions& opt) {
    if (cfg.kind != ScenarioKind::oscillator && cfg.kind != ScenarioKind::general) detail::unsupported("bargmann", cfg);
    const int K = opt.kmax.value_or(cfg.bargmann_kmax);
    if (K < 0) throw ConfigError("--kmax must be nonnegative");
    const auto& p = cfg.osc;
    const auto q = detail::terminal_phase(cfg);
    const auto ang = bargmann_angles(q, p.omega0, p.omega1);
    ojson j;
    j["params"] = detail::params_json(p, true);
    j["phase"] = detail::phase_json(q);
    j["theta"] = ang.theta;
    j["tau"] = ang.tau;
    j["phi"] = ang.phi;
    j["sign"] = ang.sign;
    j["zeta"] = zeta(q, p.omega0, p.omega1);
    Columns c{{"k", "n", "t", "re_T", "im_T", "abs_c"}, {}};
    for (int k = 0; k <= K; ++k)
        for (int n = k % 2; n <= K; n += 2) {
            const auto idx = quantum_numbers(k, n);
            const cplx T = bargmann_T(idx, ang);
            const double abs_c = std::abs(transition_amplitude(k, n, q, p.omega0, p.omega1, p.m, p.hbar));
            c.rows.push_back({double(k), double(n), bargmann_t(idx, ang.tau), T.real(), T.imag(), abs_c});
        }
    auto out = detail::artifacts(cfg, opt);
    out.json("bargmann", j);
    out.table("bargmann_t", c);
    *opt.log << "bargmann: theta = " << format_double(ang.theta) << ", tau = " << format_double(ang.tau)
             << ", phi = " << format_double(ang.phi) << "\n";
    return exit_ok;
}

inline int cmd_nls(const ScenarioConfig& cfg, const RunOptions& opt) {
    if (cfg.kind != ScenarioKind::nls) detail::unsupported("nls", cfg);
    const auto xs = cfg.grid.xs(), ys = cfg.grid.ys();
    auto mu_of_t = [&](double s) {
        const auto a = airy_pair(s);
        return std::pair{cfg.c1 * a.a + cfg.c2 * a.b, cfg.c1 * a.da + cfg.c2 * a.db};
    };
    Columns field{{"t", "x", "y", "re", "im"}, {}};
    Columns kappa{{"t", "mu", "kappa", "kappa_quadrature"}, {}};
    for (double t : cfg.times) {
        const auto q = general_coeffs(EquationVariant::increasing, cfg.c1, cfg.c2, cfg.beta0, cfg.gamma0, t);
        const double k = nls_kappa_closed(cfg.nls, cfg.c2, q.mu);
        kappa.rows.push_back({t, q.mu, k, t == 0.0 ? cfg.nls.kappa0 : nls_kappa(cfg.nls, mu_of_t, t)});
        for (double y : ys)
            for (double x : xs) {
                const cplx v = nls_solution(cfg.nls, q, k, x, y);
                field.rows.push_back({t, x, y, v.real(), v.imag()});
            }
    }
    auto out = detail::artifacts(cfg, opt);
    out.table("nls", field);
    out.table("nls_kappa", kappa);
    *opt.log << "nls: " << cfg.times.size() << " time(s), " << field.rows.size() << " rows\n";
    return exit_ok;
}

inline ojson verify_report(const std::vector<verify::CheckResult>& results) {
    ojson j = ojson::array();
    for (const auto& r : results)
        j.push_back({{"suite", r.suite},
                     {"check", r.check},
                     {"status", r.pass ? "pass" : "fail"},
                     {"measured", detail::finite_or_null(r.measured)},
                     {"tolerance", r.tolerance}});
    return j;
}

// The report goes to stdout; it is also written to the output directory when one is given.
inline int report_verify(const std::string& suite, const std::vector<verify::CheckResult>& results,
                         const RunOptions& opt, std::ostream& report) {
    const auto j = verify_report(results);
    report << j.dump(2) << "\n";
    std::optional<std::filesystem::path> dir = opt.out;
    if (!dir)
        if (const char* env = std::getenv("QPROP_OUT_DIR"); env && *env) dir = env;
    if (dir) atomic_write(*dir / "verify.json", j.dump(2) + "\n");
    int failed = 0;
    for (const auto& r : results)
        if (!r.pass) ++failed;
    std::cerr << "verify " << suite << ": " << results.size() - failed << "/" << results.size() << " passed\n";
    return failed ? exit_verify : exit_ok;
}

inline int cmd_verify(const std::string& suite, const RunOptions& opt, std::ostream& report = std::cout) {
    return report_verify(suite, verify::run_suite(suite), opt, report);
}

// Exit code for an exception escaping a command.
inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const IoError*>(&e) ||
        dynamic_cast<const ParameterError*>(&e) || dynamic_cast<const std::filesystem::filesystem_error*>(&e))
        return exit_config;
    return exit_domain;
}

}  // namespace qprop::cli
