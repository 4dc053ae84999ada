#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "classical.hpp"
#include "errors.hpp"
#include "evolve.hpp"
#include "oscillator.hpp"
#include "specfun.hpp"

namespace qprop {

// <phi, psi> = int conj(phi) psi dx by the trapezoid rule (spectral for smooth decaying data).
inline cplx overlap(const GridWaveFunction& psi, const GridWaveFunction& phi) {
    if (!psi.same_grid(phi)) throw GridMismatch("overlap: grids differ");
    const std::size_t n = psi.n_points();
    cplx s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        s += w * std::conj(phi.values[i]) * psi.values[i];
    }
    return s * psi.dx();
}

// G_ij = <b_i, b_j>
inline std::vector<std::vector<cplx>> gram_matrix(const std::vector<GridWaveFunction>& basis) {
    std::vector<std::vector<cplx>> g(basis.size(), std::vector<cplx>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) g[i][j] = overlap(basis[j], basis[i]);
    return g;
}

struct StepperOptions {
    double boundary_tol = boundary_decay;  // max |psi| allowed at the two end points
    int check_every = 100;                 // steps between boundary checks
    double max_omega_dt = 0.05;
};

// Crank-Nicolson in time with the Numerov (fourth order) Laplacian, for
// i hbar psi_t = -(hbar^2/2m) psi_xx + (m/2) omega^2(t) x^2 psi on the grid of psi0 with zero
// values beyond its ends. The Numerov Hamiltonian H = -c B^{-1} L + V is Hermitian
// (B = I + L/12 commutes with L), so the Cayley step is unitary in the discrete l2 norm.
// The potential is sampled at the half step.
inline GridWaveFunction unitary_stepper(const FrequencyProfile& profile, const GridWaveFunction& psi0,
                                        double t_final, double dt, double m = 1.0, double hbar = 1.0,
                                        const StepperOptions& opt = {}) {
    psi0.validate();
    if (!(t_final >= psi0.t)) throw ParameterError("unitary_stepper: t_final before the initial time");
    if (!(dt > 0.0)) throw ParameterError("unitary_stepper: dt must be positive");
    if (!(m > 0.0) || !(hbar > 0.0)) throw ParameterError("unitary_stepper: m and hbar must be positive");
    const long steps = std::max(1L, static_cast<long>(std::ceil((t_final - psi0.t) / dt - 1e-9)));
    const double h = (t_final - psi0.t) / steps;
    if (h * profile.max_omega(psi0.t, t_final) > opt.max_omega_dt * (1.0 + 1e-12))
        throw ParameterError("unitary_stepper: dt * max omega exceeds " + std::to_string(opt.max_omega_dt));

    const std::size_t n = psi0.n_points();
    const double dx = psi0.dx();
    const double c = hbar * hbar / (2.0 * m * dx * dx);
    const cplx k(0.0, h / (2.0 * hbar));  // i dt / (2 hbar)
    std::vector<double> x2(n);
    for (std::size_t i = 0; i < n; ++i) x2[i] = psi0.x(i) * psi0.x(i);

    std::vector<cplx> psi = psi0.values, rhs(n), diag(n), scratch;
    std::vector<double> v(n);
    auto edge_ok = [&](const std::vector<cplx>& p) {
        return std::abs(p.front()) < opt.boundary_tol && std::abs(p.back()) < opt.boundary_tol;
    };
    if (!edge_ok(psi)) throw TruncationError("unitary_stepper: initial data does not decay at the boundary");

    // B (I + k H) psi' = B (I - k H) psi with B H = -c L + B V; row i of B V is
    // (v_{i-1} psi_{i-1} + 10 v_i psi_i + v_{i+1} psi_{i+1}) / 12
    std::vector<cplx> lower(n), upper(n);
    double t = psi0.t;
    for (long s = 0; s < steps; ++s) {
        const double w2 = profile.omega_sq(t + 0.5 * h);
        for (std::size_t i = 0; i < n; ++i) v[i] = 0.5 * m * w2 * x2[i];
        // left operator A = B + k (-c L + B V), right operator C = B - k (-c L + B V)
        for (std::size_t i = 0; i < n; ++i) {
            const cplx d = 10.0 / 12.0 + k * (2.0 * c + 10.0 / 12.0 * v[i]);
            diag[i] = d;
            const cplx dr = 10.0 / 12.0 - k * (2.0 * c + 10.0 / 12.0 * v[i]);
            cplx r = dr * psi[i];
            if (i > 0) {
                lower[i] = 1.0 / 12.0 + k * (-c + v[i - 1] / 12.0);
                r += (1.0 / 12.0 - k * (-c + v[i - 1] / 12.0)) * psi[i - 1];
            }
            if (i + 1 < n) {
                upper[i] = 1.0 / 12.0 + k * (-c + v[i + 1] / 12.0);
                r += (1.0 / 12.0 - k * (-c + v[i + 1] / 12.0)) * psi[i + 1];
            }
            rhs[i] = r;
        }
        scratch.resize(n);
        cplx denom = diag[0];
        scratch[0] = upper[0] / denom;
        rhs[0] /= denom;
        for (std::size_t i = 1; i < n; ++i) {
            denom = diag[i] - lower[i] * scratch[i - 1];
            if (i + 1 < n) scratch[i] = upper[i] / denom;
            rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
        }
        for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i] * rhs[i + 1];
        psi.swap(rhs);
        t = psi0.t + (s + 1) * h;
        if (((s + 1) % opt.check_every == 0 || s + 1 == steps) && !edge_ok(psi))
            throw TruncationError("unitary_stepper: boundary mass exceeds tolerance at t = " + std::to_string(t));
    }
    return GridWaveFunction(psi0.x_min, psi0.x_max, std::move(psi), t_final);
}

// Discrete l2 norm used by the stepper (equal weights); conserved to round-off.
inline double l2_norm_sq(const GridWaveFunction& psi) {
    double s = 0.0;
    for (const auto& v : psi.values) s += std::norm(v);
    return s * psi.dx();
}

// Stepper-based amplitudes c_kn = <Psi_k(omega1), psi_n(T)> for k, n <= n_max.
struct OracleAmplitudes {
    int n_max = 0;
    std::vector<cplx> entries;  // row k, column n

    cplx at(int k, int n) const { return entries[static_cast<std::size_t>(k) * (n_max + 1) + n]; }
};

inline OracleAmplitudes oracle_amplitudes(const FrequencyProfile& profile, double omega0, double omega1, double T,
                                          int n_max, double m = 1.0, double hbar = 1.0, double x_half = 12.0,
                                          std::size_t points = 1024, double dt = 1e-4) {
    OracleAmplitudes out;
    out.n_max = n_max;
    out.entries.assign(static_cast<std::size_t>(n_max + 1) * (n_max + 1), 0.0);
    const double unit = std::sqrt(hbar / (m * omega0));
    const double lo = -x_half * unit, hi = x_half * unit;
    std::vector<GridWaveFunction> terminal;
    for (int k = 0; k <= n_max; ++k) terminal.push_back(sample_eigenstate(k, omega1, m, hbar, lo, hi, points));
    for (int n = 0; n <= n_max; ++n) {
        const auto psi = unitary_stepper(profile, sample_eigenstate(n, omega0, m, hbar, lo, hi, points), T, dt, m, hbar);
        for (int k = 0; k <= n_max; ++k) out.entries[static_cast<std::size_t>(k) * (n_max + 1) + n] = overlap(psi, terminal[k]);
    }
    return out;
}

// int exp(-lambda^2 x^2) H_m(a x) H_n(b x) dx, Re lambda^2 > 0, a, b real.
// Powers of (a^2 - lambda^2) and (b^2 - lambda^2) are taken separately on the principal branch.
inline cplx bailey_closed(int m, int n, double a, double b, cplx lambda_sq) {
    if (m < 0 || n < 0) throw ParameterError("bailey: negative index");
    if (!(lambda_sq.real() > 0.0)) throw DomainError("bailey: Re lambda^2 must be positive");
    if ((m + n) % 2 != 0) return 0.0;
    const cplx lam = std::sqrt(lambda_sq);
    const cplx A = a * a - lambda_sq, B = b * b - lambda_sq;
    const cplx rA = std::sqrt(A), rB = std::sqrt(B);
    const cplx z = 0.5 * (1.0 - a * b / (rA * rB));
    const cplx f = hyp2f1_terminating<double, cplx>(m, n, 0.5 * (1 - m - n), z);
    return std::pow(2.0, m + n) / std::pow(lam, m + n + 1) * std::tgamma(0.5 * (m + n + 1)) * std::pow(rA, m) *
           std::pow(rB, n) * f;
}

inline cplx bailey_quadrature(int m, int n, double a, double b, cplx lambda_sq) {
    auto f = [&](double x) { return std::exp(-lambda_sq * x * x) * hermite(m, a * x) * hermite(n, b * x); };
    const double L = std::sqrt((40.0 + 2.0 * (m + n) * std::log(2.0 + std::abs(a) + std::abs(b))) / lambda_sq.real());
    using gk = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double re = gk::integrate([&](double x) { return f(x).real(); }, -L, L, 15, 1e-14);
    const double im = gk::integrate([&](double x) { return f(x).imag(); }, -L, L, 15, 1e-14);
    return {re, im};
}

// Gauss transform: int exp(-lambda^2 (x - y)^2) H_n(a y) dy.
inline cplx gauss_transform_closed(int n, double a, cplx lambda_sq, double x) {
    if (n < 0) throw ParameterError("gauss_transform: negative index");
    if (!(lambda_sq.real() > 0.0)) throw DomainError("gauss_transform: Re lambda^2 must be positive");
    const cplx lam = std::sqrt(lambda_sq);
    const cplx r = std::sqrt(lambda_sq - a * a);
    if (r == 0.0) {
        // limit lambda^2 = a^2: only the leading power survives
        return std::sqrt(std::numbers::pi) / std::pow(lam, n + 1) * std::pow(2.0 * lam * a * x, n);
    }
    return std::sqrt(std::numbers::pi) / std::pow(lam, n + 1) * std::pow(r, n) * hermite<cplx>(n, lam * a * x / r);
}

inline cplx gauss_transform_quadrature(int n, double a, cplx lambda_sq, double x) {
    auto f = [&](double y) { return std::exp(-lambda_sq * (x - y) * (x - y)) * hermite(n, a * y); };
    const double L = std::sqrt((40.0 + 2.0 * n * std::log(2.0 + std::abs(a) * (1 + std::abs(x)))) / lambda_sq.real());
    using gk = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double re = gk::integrate([&](double y) { return f(y).real(); }, x - L, x + L, 15, 1e-14);
    const double im = gk::integrate([&](double y) { return f(y).imag(); }, x - L, x + L, 15, 1e-14);
    return {re, im};
}

}  // namespace qprop
