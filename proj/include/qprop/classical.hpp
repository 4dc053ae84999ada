#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/odeint.hpp>

#include "errors.hpp"
#include "oscillator.hpp"

namespace qprop {

// Sampled solution of mu'' + omega^2(t) mu = 0 with quintic Hermite interpolation
// between samples (mu'' = -omega^2 mu supplies the second derivative at nodes).
class ClassicalSolution {
public:
    ClassicalSolution() = default;
    ClassicalSolution(FrequencyProfile profile, std::vector<double> t, std::vector<long double> mu,
                      std::vector<long double> dmu)
        : profile_(std::move(profile)), t_(std::move(t)), mu_x_(std::move(mu)), dmu_x_(std::move(dmu)) {
        mu_.assign(mu_x_.begin(), mu_x_.end());
        dmu_.assign(dmu_x_.begin(), dmu_x_.end());
    }

    const std::vector<double>& t() const { return t_; }
    const std::vector<double>& mu() const { return mu_; }
    const std::vector<double>& dmu() const { return dmu_; }
    const FrequencyProfile& profile() const { return profile_; }
    double t_begin() const { return t_.front(); }
    double t_end() const { return t_.back(); }

    // (mu, mu') at s
    std::pair<double, double> operator()(double s) const {
        if (s < t_.front() - 1e-12 || s > t_.back() + 1e-12)
            throw DomainError("classical solution: t outside the sampled span");
        std::size_t i = static_cast<std::size_t>(std::upper_bound(t_.begin(), t_.end(), s) - t_.begin());
        i = std::clamp<std::size_t>(i, 1, t_.size() - 1) - 1;
        // extended precision: rounding the nodes to double would put ~eps/h noise on the slope
        using ld = long double;
        const ld h = static_cast<ld>(t_[i + 1]) - t_[i];
        const ld u = (s - static_cast<ld>(t_[i])) / h;
        const ld a0 = -static_cast<ld>(profile_.omega_sq(t_[i])) * mu_x_[i] * h * h;
        const ld a1 = -static_cast<ld>(profile_.omega_sq(t_[i + 1])) * mu_x_[i + 1] * h * h;
        const ld v0 = dmu_x_[i] * h, v1 = dmu_x_[i + 1] * h;
        const ld p0 = mu_x_[i], p1 = mu_x_[i + 1];
        const ld u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
        const ld value = p0 * (1 - 10 * u3 + 15 * u4 - 6 * u5) + v0 * (u - 6 * u3 + 8 * u4 - 3 * u5) +
                         a0 * (0.5L * u2 - 1.5L * u3 + 1.5L * u4 - 0.5L * u5) + a1 * (0.5L * u3 - u4 + 0.5L * u5) +
                         v1 * (-4 * u3 + 7 * u4 - 3 * u5) + p1 * (10 * u3 - 15 * u4 + 6 * u5);
        const ld slope = p0 * (-30 * u2 + 60 * u3 - 30 * u4) + v0 * (1 - 18 * u2 + 32 * u3 - 15 * u4) +
                         a0 * (u - 4.5L * u2 + 6 * u3 - 2.5L * u4) + a1 * (1.5L * u2 - 4 * u3 + 2.5L * u4) +
                         v1 * (-12 * u2 + 28 * u3 - 15 * u4) + p1 * (30 * u2 - 60 * u3 + 30 * u4);
        return {static_cast<double>(value), static_cast<double>(slope / h)};
    }

private:
    FrequencyProfile profile_ = FrequencyProfile::constant(1.0);
    std::vector<double> t_;
    std::vector<double> mu_;
    std::vector<double> dmu_;
    std::vector<long double> mu_x_;
    std::vector<long double> dmu_x_;
};

namespace detail {

// extended precision keeps node-to-node error well below double round-off
using classical_state = std::array<long double, 2>;

struct ClassicalRhs {
    const FrequencyProfile* profile;
    long* evaluations;
    long limit;
    void operator()(const classical_state& x, classical_state& dxdt, long double t) const {
        if (++*evaluations > limit)
            throw StiffnessError("classical integration: step size collapsed near t = " +
                                 std::to_string(static_cast<double>(t)));
        dxdt[0] = x[1];
        dxdt[1] = -static_cast<long double>(profile->omega_sq(static_cast<double>(t))) * x[0];
    }
};

}  // namespace detail

// Adaptive Runge-Kutta-Fehlberg 7(8), local error tolerance tol, restarted at
// profile breakpoints. More than max_evaluations right-hand-side calls count as step collapse.
inline ClassicalSolution integrate_classical(const FrequencyProfile& profile, double mu0, double dmu0,
                                             const std::vector<double>& t_grid, double tol = 1e-12,
                                             long max_evaluations = 200000000L) {
    namespace ode = boost::numeric::odeint;
    if (t_grid.size() < 2) throw ParameterError("integrate_classical: need at least two grid points");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw ParameterError("integrate_classical: t_grid must increase");

    using state = detail::classical_state;
    auto stepper = ode::make_controlled(static_cast<long double>(tol), static_cast<long double>(tol),
                                        ode::runge_kutta_fehlberg78<state, long double>());
    long evaluations = 0;
    detail::ClassicalRhs rhs{&profile, &evaluations, max_evaluations};
    detail::classical_state x{mu0, dmu0};
    std::vector<long double> mu{mu0}, dmu{dmu0};
    const auto breaks = profile.breakpoints();
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        long double a = t_grid[i - 1];
        const long double b = t_grid[i];
        std::vector<long double> stops;
        for (double br : breaks)
            if (br > a && br < b) stops.push_back(br);
        stops.push_back(b);
        for (long double s : stops) {
            const long double h0 = std::min(1e-3L, s - a);
            ode::integrate_adaptive(stepper, rhs, x, a, s, h0);
            a = s;
        }
        mu.push_back(x[0]);
        dmu.push_back(x[1]);
    }
    return ClassicalSolution(profile, t_grid, std::move(mu), std::move(dmu));
}

// Same Runge-Kutta-Fehlberg 7(8) formula with a fixed step; used for order studies.
inline std::pair<double, double> integrate_classical_fixed(const FrequencyProfile& profile, double mu0,
                                                           double dmu0, double t_end, int steps) {
    namespace ode = boost::numeric::odeint;
    ode::runge_kutta_fehlberg78<detail::classical_state, long double> stepper;
    long evaluations = 0;
    detail::ClassicalRhs rhs{&profile, &evaluations, 2000000000L};
    detail::classical_state x{mu0, dmu0};
    const long double dt = static_cast<long double>(t_end) / steps;
    for (int i = 0; i < steps; ++i) stepper.do_step(rhs, x, i * dt, dt);
    return {static_cast<double>(x[0]), static_cast<double>(x[1])};
}

inline std::vector<double> uniform_grid(double t0, double t1, int n) {
    if (n < 2) throw ParameterError("uniform_grid: need at least two points");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = t0 + (t1 - t0) * i / (n - 1);
    g.back() = t1;
    return g;
}

inline double wronskian(const ClassicalSolution& u, const ClassicalSolution& v, double t) {
    const auto [a, da] = u(t);
    const auto [b, db] = v(t);
    return a * db - da * b;
}

// Fundamental pair for the quantum oscillator: mu(0)=0, mu'(0)=hbar/m and nu(0)=1, nu'(0)=0.
struct OscillatorSolution {
    ClassicalSolution mu;
    ClassicalSolution nu;
    double m = 1.0;
    double hbar = 1.0;
};

// samples = 0 picks a spacing of about 0.001/max omega (at least 1001 points), where the
// interpolated slope is accurate to round-off.
inline OscillatorSolution solve_oscillator(const FrequencyProfile& profile, double m, double hbar, double t_end,
                                           int samples = 0, double tol = 1e-16) {
    if (!(m > 0.0) || !(hbar > 0.0)) throw ParameterError("solve_oscillator: m and hbar must be positive");
    if (!(t_end > 0.0)) throw ParameterError("solve_oscillator: t_end must be positive");
    if (samples == 0) {
        const double w = std::max(profile.max_omega(0.0, t_end), 1e-3);
        samples = std::max(1001, static_cast<int>(std::ceil(t_end * w / 0.001)) + 1);
    }
    if (samples < 2) throw ParameterError("solve_oscillator: need at least two samples");
    // breakpoints of omega^2 become nodes: mu is only C^2 there and the interpolant
    // must not straddle the kink
    std::vector<double> cuts{0.0};
    for (double b : profile.breakpoints())
        if (b > 1e-12 && b < t_end - 1e-12) cuts.push_back(b);
    cuts.push_back(t_end);
    const double spacing = t_end / (samples - 1);
    std::vector<double> grid{0.0};
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const int n = std::max(1, static_cast<int>(std::ceil((cuts[i] - cuts[i - 1]) / spacing - 1e-9)));
        for (int j = 1; j <= n; ++j) grid.push_back(j == n ? cuts[i] : cuts[i - 1] + (cuts[i] - cuts[i - 1]) * j / n);
    }
    return {integrate_classical(profile, 0.0, hbar / m, grid, tol), integrate_classical(profile, 1.0, 0.0, grid, tol),
            m, hbar};
}

namespace detail {

// first sample interval on (0, t] where f changes sign, refined by bisection on the interpolant
template <class F>
bool find_sign_change(const std::vector<double>& grid, const std::vector<double>& values, double t, F&& f,
                      double& lo, double& hi) {
    // the sign reference is the first sample after the origin, where mu itself may vanish
    for (std::size_t i = 2; i < grid.size() && grid[i - 1] < t; ++i) {
        const double b = std::min(grid[i], t);
        const double fb = (b == grid[i]) ? values[i] : f(b);
        if ((values[i - 1] > 0.0) != (fb > 0.0) || fb == 0.0) {
            lo = grid[i - 1];
            hi = b;
            double flo = values[i - 1];
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if ((fm > 0.0) == (flo > 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            return true;
        }
    }
    return false;
}

}  // namespace detail

// gamma = (hbar/m)^2 (1/(mu mu') - int_0^t omega^2 / mu'^2)
inline double gamma_quadrature(const OscillatorSolution& sol, double t) {
    if (!(t > 0.0)) throw DomainError("gamma_quadrature: t must be positive");
    const auto& mu = sol.mu;
    double lo = 0.0, hi = 0.0;
    if (detail::find_sign_change(mu.t(), mu.dmu(), t, [&](double s) { return mu(s).second; }, lo, hi))
        throw SingularError("gamma_quadrature: mu' vanishes in [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "], the integrand 1/mu'^2 is singular");
    const auto& profile = mu.profile();
    auto integrand = [&](double s) {
        const double d = mu(s).second;
        return profile.omega_sq(s) / (d * d);
    };
    // the interpolant is a quintic on each sample interval, so integrate interval by interval,
    // also splitting at profile breakpoints
    std::vector<double> cuts;
    for (double g : mu.t())
        if (g < t) cuts.push_back(g);
    for (double b : profile.breakpoints())
        if (b > 0.0 && b < t) cuts.push_back(b);
    cuts.push_back(t);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double integral = 0.0, comp = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double piece =
            boost::math::quadrature::gauss<double, 10>::integrate(integrand, cuts[i - 1], cuts[i]);
        const double y = piece - comp, s = integral + y;
        comp = (s - integral) - y;
        integral = s;
    }
    const auto [m_t, dm_t] = mu(t);
    const double r = sol.hbar / sol.m;
    return r * r * (1.0 / (m_t * dm_t) - integral);
}

// gamma from the companion solution: gamma' = -(hbar/m)^2/mu^2 = (hbar/m) (nu/mu)'
inline double gamma_companion(const OscillatorSolution& sol, double t) {
    if (!(t > 0.0)) throw DomainError("gamma_companion: t must be positive");
    return sol.hbar / sol.m * sol.nu(t).first / sol.mu(t).first;
}

}  // namespace qprop
