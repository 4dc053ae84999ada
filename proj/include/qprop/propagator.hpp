#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "classical.hpp"
#include "coeffs.hpp"
#include "errors.hpp"
#include "oscillator.hpp"

namespace qprop {

using cplx = std::complex<double>;

// exp(i s (alpha x^2 + beta x y + gamma y^2)) / sqrt(2 pi i mu), principal root.
// Before the first caustic mu keeps its sign, so the principal branch is continuous in t.
inline cplx quadratic_kernel(const QuadraticPhase& q, double x, double y, double s = 1.0) {
    const cplx norm = std::sqrt(cplx(0.0, 2.0 * std::numbers::pi * q.mu));
    const double phase = s * (q.alpha * x * x + q.beta * x * y + q.gamma * y * y);
    return std::polar(1.0, phase) / norm;
}

inline cplx greens(EquationVariant v, double x, double y, double t) {
    return quadratic_kernel(green_coeffs(v, t), x, y);
}

inline cplx kernel_K(EquationVariant v, double c1, double c2, double beta0, double gamma0, double x, double y,
                     double t) {
    return quadratic_kernel(general_coeffs(v, c1, c2, beta0, gamma0, t), x, y);
}

inline cplx free_propagator(double x, double y, double t, double m = 1.0, double hbar = 1.0) {
    return quadratic_kernel(free_particle_phase(t, m, hbar), x, y, m / (2.0 * hbar));
}

inline cplx oscillator_green(double x, double y, double t, const OscillatorConfig& cfg) {
    return quadratic_kernel(oscillator_phase(cfg, t), x, y, cfg.m / (2.0 * cfg.hbar));
}

inline cplx general_green(double x, double y, double t, const OscillatorSolution& sol,
                          GammaMethod method = GammaMethod::quadrature) {
    return quadratic_kernel(general_oscillator_coeffs(sol, t, method), x, y, sol.m / (2.0 * sol.hbar));
}

// Dense evaluation: for each time, values indexed [iy * xs.size() + ix] (x fastest).
// The kernel coefficients are computed once per time.
struct KernelGrid {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> times;
    std::vector<cplx> values;  // times.size() * ys.size() * xs.size()

    cplx at(std::size_t it, std::size_t iy, std::size_t ix) const {
        return values[(it * ys.size() + iy) * xs.size() + ix];
    }
};

template <class PhaseOfT>
KernelGrid evaluate_grid(const std::vector<double>& xs, const std::vector<double>& ys,
                         const std::vector<double>& times, PhaseOfT&& phase_of_t, double s = 1.0) {
    KernelGrid g{xs, ys, times, {}};
    g.values.reserve(xs.size() * ys.size() * times.size());
    for (double t : times) {
        const QuadraticPhase q = phase_of_t(t);
        for (double y : ys)
            for (double x : xs) g.values.push_back(quadratic_kernel(q, x, y, s));
    }
    return g;
}

}  // namespace qprop
