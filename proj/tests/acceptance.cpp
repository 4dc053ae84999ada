// Acceptance run: each criterion is a group of registered checks with a wall-clock budget.
// Prints one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "qprop/verify.hpp"

namespace {

struct Criterion {
    int id;
    std::string title;
    double budget_s;
    std::vector<std::pair<std::string, std::string>> checks;  // suite, name
};

std::vector<Criterion> criteria() {
    std::vector<Criterion> c = {
        {1, "Airy core Wronskians and series vs standard Airy", 1.0,
         {{"specfun", "wronskian_ab"}, {"specfun", "wronskian_derivs"}, {"specfun", "series_vs_standard"}}},
        {2, "Riccati residuals, seven variants", 5.0, {}},
        {3, "PDE residuals on a 10x10x5 box", 30.0, {}},
        {4, "composition identities by quadrature", 30.0, {{"propagator", "composition"}}},
        {5, "free-particle limit at t = 1e-3", 5.0, {{"propagator", "free_particle_limit"}}},
        {6, "unitarity n <= 4, chirp and sudden", 10.0,
         {{"amplitudes", "unitarity_chirp"}, {"amplitudes", "unitarity_sudden"}}},
        {7, "stepper projections vs closed-form |c_kn|^2", 300.0, {{"oracle", "stepper_projections"}}},
        {8, "sudden ground overlap", 1.0, {{"amplitudes", "sudden_ground_overlap"}}},
        {9, "Clausen/parity identities, exact and float", 10.0,
         {{"amplitudes", "clausen_identity"}, {"specfun", "parity_split_float"}, {"specfun", "clausen_float"}}},
        {10, "negative-binomial closures", 1.0, {{"amplitudes", "negative_binomial_closure"}}},
        {11, "Bargmann modulus and integral representation", 30.0,
         {{"amplitudes", "bargmann_modulus"}, {"amplitudes", "bargmann_integral"}}},
        {12, "NLS residuals and kappa closed forms", 10.0,
         {{"evolve", "nls_residual_s_half"}, {"evolve", "nls_residual_s1"}, {"evolve", "nls_kappa_quadrature"}}},
    };
    for (const char* v : {"increasing", "oscillatory", "momentum_increasing", "momentum_oscillatory", "gauge",
                          "oscillator_chirp", "oscillator_general"}) {
        c[1].checks.push_back({"coeffs", std::string("riccati_") + v});
        c[2].checks.push_back({"propagator", std::string("pde_") + v});
    }
    return c;
}

}  // namespace

int main() {
    using clock = std::chrono::steady_clock;
    int failed = 0;
    for (const auto& c : criteria()) {
        const auto start = clock::now();
        std::vector<qprop::verify::CheckResult> results;
        for (const auto& [suite, name] : c.checks) {
            try {
                results.push_back(qprop::verify::run_named(suite, name));
            } catch (const std::exception&) {
                results.push_back({suite, name, false, std::nan(""), 0.0});
            }
        }
        const double elapsed = std::chrono::duration<double>(clock::now() - start).count();
        bool pass = elapsed < c.budget_s;
        for (const auto& r : results) pass = pass && r.pass;
        if (!pass) ++failed;
        std::printf("criterion %2d %s: %s (%.3f s, budget %.0f s)\n", c.id, pass ? "PASS" : "FAIL", c.title.c_str(),
                    elapsed, c.budget_s);
        for (const auto& r : results)
            std::printf("    %-4s %s/%s measured %.3e tol %.1e\n", r.pass ? "ok" : "bad", r.suite.c_str(),
                        r.check.c_str(), r.measured, r.tolerance);
    }
    std::printf("%d of 12 criteria passed\n", 12 - failed);
    return failed == 0 ? 0 : 1;
}
