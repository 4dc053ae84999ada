#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "coeffs.hpp"
#include "errors.hpp"
#include "propagator.hpp"
#include "specfun.hpp"

namespace qprop {

// Samples of psi on the uniform grid x_i = x_min + i (x_max - x_min)/(n - 1).
struct GridWaveFunction {
    double x_min = -1.0;
    double x_max = 1.0;
    std::vector<cplx> values;
    double t = 0.0;

    GridWaveFunction() = default;
    GridWaveFunction(double lo, double hi, std::vector<cplx> v, double time = 0.0)
        : x_min(lo), x_max(hi), values(std::move(v)), t(time) {
        validate();
    }

    template <class F>
    static GridWaveFunction sample(F&& f, double lo, double hi, std::size_t n, double time = 0.0) {
        if (n < 16) throw ParameterError("grid wave function: need at least 16 points");
        std::vector<cplx> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = f(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
        return GridWaveFunction(lo, hi, std::move(v), time);
    }

    void validate() const {
        if (values.size() < 16) throw ParameterError("grid wave function: need at least 16 points");
        if (!(x_max > x_min)) throw ParameterError("grid wave function: x_max must exceed x_min");
    }

    std::size_t n_points() const { return values.size(); }
    double dx() const { return (x_max - x_min) / static_cast<double>(values.size() - 1); }
    double x(std::size_t i) const { return x_min + (x_max - x_min) * static_cast<double>(i) / (values.size() - 1); }

    bool same_grid(const GridWaveFunction& o) const {
        return values.size() == o.values.size() && std::abs(x_min - o.x_min) <= 1e-12 * std::max(1.0, std::abs(x_min)) &&
               std::abs(x_max - o.x_max) <= 1e-12 * std::max(1.0, std::abs(x_max));
    }

    double norm_sq() const {
        double s = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double w = (i == 0 || i + 1 == values.size()) ? 0.5 : 1.0;
            s += w * std::norm(values[i]);
        }
        return s * dx();
    }
};

inline GridWaveFunction linear_combination(cplx a, const GridWaveFunction& f, cplx b, const GridWaveFunction& g) {
    if (!f.same_grid(g)) throw GridMismatch("linear_combination: grids differ");
    std::vector<cplx> v(f.values.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * f.values[i] + b * g.values[i];
    return GridWaveFunction(f.x_min, f.x_max, std::move(v), f.t);
}

inline constexpr double boundary_decay = 1e-10;

// psi(x) = int G(x, y) phi(y) dy by the trapezoid rule on the grid of phi, at the points xs.
// The integrand is smooth and negligible at the ends, where the rule converges spectrally.
inline std::vector<cplx> superposition(const QuadraticPhase& q, double s, const GridWaveFunction& phi,
                                       const std::vector<double>& xs) {
    phi.validate();
    const std::size_t n = phi.n_points();
    if (std::abs(phi.values.front()) >= boundary_decay || std::abs(phi.values.back()) >= boundary_decay)
        throw TruncationError("solve_cauchy: initial data does not decay at the grid boundary (|phi| >= 1e-10)");
    const cplx norm = std::sqrt(cplx(0.0, 2.0 * std::numbers::pi * q.mu));
    std::vector<cplx> weighted(n);
    std::vector<double> ys(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double y = phi.x(j), w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
        ys[j] = y;
        weighted[j] = w * phi.dx() * std::polar(1.0, s * q.gamma * y * y) * phi.values[j];
    }
    std::vector<cplx> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i], k = s * q.beta * x;
        cplx acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += std::polar(1.0, k * ys[j]) * weighted[j];
        out[i] = std::polar(1.0, s * q.alpha * x * x) * acc / norm;
    }
    return out;
}

inline GridWaveFunction superposition(const QuadraticPhase& q, double s, const GridWaveFunction& phi, double t) {
    std::vector<double> xs(phi.n_points());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = phi.x(i);
    return GridWaveFunction(phi.x_min, phi.x_max, superposition(q, s, phi, xs), t);
}

inline GridWaveFunction solve_cauchy(EquationVariant v, const GridWaveFunction& phi, double t) {
    return superposition(green_coeffs(v, t), 1.0, phi, t);
}

inline GridWaveFunction solve_cauchy(const OscillatorConfig& cfg, const GridWaveFunction& phi, double t) {
    return superposition(oscillator_phase(cfg, t), cfg.m / (2.0 * cfg.hbar), phi, t);
}

inline GridWaveFunction solve_cauchy(const OscillatorSolution& sol, const GridWaveFunction& phi, double t,
                                     GammaMethod method = GammaMethod::automatic) {
    return superposition(general_oscillator_coeffs(sol, t, method), sol.m / (2.0 * sol.hbar), phi, t);
}

inline constexpr int eigenstate_n_max = 60;

// Normalized oscillator eigenfunction, by the normalized Hermite recurrence
// psi_{k+1} = sqrt(2/(k+1)) xi psi_k - sqrt(k/(k+1)) psi_{k-1}.
inline double eigenstate(int n, double omega, double m, double hbar, double x) {
    if (n < 0 || n > eigenstate_n_max) throw RangeError("eigenstate: n must be in [0, 60]");
    if (!(omega > 0.0) || !(m > 0.0) || !(hbar > 0.0)) throw ParameterError("eigenstate: omega, m, hbar must be positive");
    const double xi = std::sqrt(m * omega / hbar) * x;
    double prev = 0.0;
    double cur = std::pow(m * omega / (std::numbers::pi * hbar), 0.25) * std::exp(-0.5 * xi * xi);
    for (int k = 0; k < n; ++k) {
        const double next = std::sqrt(2.0 / (k + 1)) * xi * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

inline GridWaveFunction sample_eigenstate(int n, double omega, double m, double hbar, double lo, double hi,
                                          std::size_t points) {
    return GridWaveFunction::sample([&](double x) { return cplx(eigenstate(n, omega, m, hbar, x)); }, lo, hi, points);
}

// Closed-form evolution of the initial eigenstate n (frequency omega0) under a kernel with
// coefficients q in physical units (phase factor m/(2 hbar), mu ~ hbar t/m). Powers are on
// the branch continued from t -> 0+, where the result tends to the initial eigenstate.
inline std::function<cplx(double)> evolve_eigenstate_analytic(int n, const QuadraticPhase& q, double omega0,
                                                              double m = 1.0, double hbar = 1.0) {
    if (n < 0 || n > eigenstate_n_max) throw RangeError("evolve_eigenstate_analytic: n must be in [0, 60]");
    if (q.mu == 0.0) throw CausticError(q.t, q.t, "evolve_eigenstate_analytic");
    const double s = m / hbar;
    const double mu = s * q.mu, a = q.alpha, b = q.beta, g = q.gamma, w = omega0;
    const double d = g * g + w * w;
    // 1/sqrt(mu 2^n n! (gamma + i omega0)); Im(mu (gamma + i omega0)) keeps the sign of mu,
    // so the principal root is continuous before the first caustic
    const double log_fact = std::lgamma(n + 1.0) + n * std::log(2.0);
    const cplx pre = std::pow(w / std::numbers::pi, 0.25) * std::exp(-0.5 * log_fact) /
                     std::sqrt(mu * cplx(g, w)) * std::polar(1.0, n * (std::numbers::pi / 2 + std::atan2(g, w)));
    const double chirp = 0.5 * (a - b * b * g / (4 * d));
    const double width = w * b * b / (8 * d);
    const double scale = std::sqrt(w / (4 * d)) * b;
    const double root_s = std::sqrt(s), quarter_s = std::pow(s, 0.25);
    return [=](double x) {
        const double u = root_s * x;
        return quarter_s * pre * std::polar(std::exp(-width * u * u), chirp * u * u) * hermite(n, scale * u);
    };
}

inline std::function<cplx(double)> evolve_eigenstate_analytic(int n, double t, const OscillatorConfig& cfg) {
    return evolve_eigenstate_analytic(n, oscillator_phase(cfg, t), cfg.omega0, cfg.m, cfg.hbar);
}

// Solution of the singular gauge equation with lim e^{i x^2/t} psi = phi as t -> 0+.
inline std::vector<cplx> gauge_solve(const GridWaveFunction& phi, double t, const std::vector<double>& xs) {
    if (!(t > 0.0)) throw SingularError("gauge_solve: the equation is singular at t <= 0");
    auto psi = superposition(green_coeffs(EquationVariant::increasing, t), 1.0, phi, xs);
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= std::polar(1.0, -xs[i] * xs[i] / t);
    return psi;
}

inline GridWaveFunction gauge_solve(const GridWaveFunction& phi, double t) {
    std::vector<double> xs(phi.n_points());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = phi.x(i);
    return GridWaveFunction(phi.x_min, phi.x_max, gauge_solve(phi, t, xs), t);
}

// Particular solutions e^{i phi}/sqrt(mu) exp(i(alpha x^2 + beta x y + gamma y^2 + kappa)) of
// i psi_t + psi_xx/4 + t x^2 psi = h(t) |psi|^{2s} psi with h = coupling * mu'.
struct NlsParams {
    double s = 1.0;
    double coupling = 0.0;
    double kappa0 = 0.0;
    double phi = 0.0;

    void validate() const {
        if (!(s >= 0.0)) throw ParameterError("nls: s must be nonnegative");
    }
};

// closed form of kappa(t) for h = coupling * mu'
inline double nls_kappa_closed(const NlsParams& p, double mu0, double mu_t) {
    p.validate();
    if (!(mu0 > 0.0) || !(mu_t > 0.0)) throw ParameterError("nls: closed forms need mu > 0");
    if (p.s == 1.0) return p.kappa0 - p.coupling * std::log(mu_t / mu0);
    return p.kappa0 - p.coupling * (std::pow(mu_t, 1.0 - p.s) - std::pow(mu0, 1.0 - p.s)) / (1.0 - p.s);
}

// kappa(t) = kappa0 - int_0^t h / mu^s by adaptive quadrature. mu_of_t returns (mu, mu').
inline double nls_kappa(const NlsParams& p, const std::function<std::pair<double, double>(double)>& mu_of_t,
                        const std::function<double(double)>& h, double t) {
    p.validate();
    const double mu0 = mu_of_t(0.0).first;
    if (!(mu0 > 0.0)) throw ParameterError("nls: mu(0) must be positive");
    const int scan = 200;
    for (int i = 1; i <= scan; ++i) {
        const double v = mu_of_t(t * i / scan).first;
        if (!(v > 0.0)) throw SingularError("nls_kappa: mu vanishes in [0, t], the integrand is singular");
    }
    auto integrand = [&](double tau) { return h(tau) / std::pow(mu_of_t(tau).first, p.s); };
    const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, t, 15, 1e-14);
    return p.kappa0 - integral;
}

inline double nls_kappa(const NlsParams& p, const std::function<std::pair<double, double>(double)>& mu_of_t, double t) {
    return nls_kappa(p, mu_of_t, [&](double tau) { return p.coupling * mu_of_t(tau).second; }, t);
}

inline cplx nls_solution(const NlsParams& p, const QuadraticPhase& q, double kappa, double x, double y) {
    if (!(q.mu > 0.0)) throw CausticError(q.t, q.t, "nls_solution: mu must stay positive");
    return std::polar(1.0 / std::sqrt(q.mu), p.phi + q.alpha * x * x + q.beta * x * y + q.gamma * y * y + kappa);
}

// Increasing-case particular solution with mu = c1 a + c2 b and kappa by the closed form.
inline cplx nls_solution(const NlsParams& p, double c1, double c2, double beta0, double gamma0, double x, double y,
                         double t) {
    const auto q = general_coeffs(EquationVariant::increasing, c1, c2, beta0, gamma0, t);
    return nls_solution(p, q, nls_kappa_closed(p, c2, q.mu), x, y);
}

}  // namespace qprop
