#pragma once

// Named self-checks grouped by suite. Each compares a closed form against an independent
// computation (high-precision series, finite differences, quadrature, exact rationals or the
// stepper) and reports the measured defect next to its tolerance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "amplitudes.hpp"
#include "classical.hpp"
#include "coeffs.hpp"
#include "evolve.hpp"
#include "oracle.hpp"
#include "propagator.hpp"
#include "specfun.hpp"

namespace qprop::verify {

struct CheckResult {
    std::string suite;
    std::string check;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
};

struct Check {
    std::string suite;
    std::string name;
    std::function<CheckResult()> run;
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"specfun", "coeffs", "propagator", "evolve", "amplitudes",
                                                   "oracle"};
    return names;
}

namespace detail {

const cplx I(0.0, 1.0);

inline CheckResult below(const std::string& suite, const std::string& name, double measured, double tol) {
    return {suite, name, std::isfinite(measured) && measured <= tol, measured, tol};
}

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

inline cplx integrate_complex(const std::function<cplx(double)>& f, double a, double b, double tol = 1e-13,
                              unsigned depth = 12) {
    using gk = boost::math::quadrature::gauss_kronrod<double, 61>;
    return {gk::integrate([&](double x) { return f(x).real(); }, a, b, depth, tol),
            gk::integrate([&](double x) { return f(x).imag(); }, a, b, depth, tol)};
}

// Integral over the real line of an entire f = exp(i (A z^2 + B z)) g(z), Im A >= 0, along
// the steepest-descent line through the saddle.
inline cplx fresnel_line_integral(const std::function<cplx(cplx)>& f, cplx A, cplx B) {
    const cplx z0 = -B / (2.0 * A);
    const cplx dir = std::polar(1.0, 0.5 * (std::numbers::pi / 2 - std::arg(A)));
    const double L = std::sqrt(80.0 / std::abs(A));
    return dir * integrate_complex([&](double s) { return f(z0 + dir * s); }, -L, L, 1e-11);
}

// c_t G_t + c_xx G_xx + c_x G_x + V G
struct Pde {
    cplx c_t;
    std::function<double(double)> c_xx;
    std::function<cplx(double, double)> c_x;
    std::function<cplx(double, double)> potential;
};

// largest residual over a 10 x 10 x 5 box with fourth-order differences
inline double box_residual(const std::function<QuadraticPhase(double)>& phase_of_t, double s, const Pde& pde,
                           double t0, double t1, double xmax = 1.0, double h = 5e-4) {
    double worst = 0.0;
    for (int it = 0; it < 5; ++it) {
        const double t = t0 + (t1 - t0) * it / 4.0;
        const QuadraticPhase q[5] = {phase_of_t(t - 2 * h), phase_of_t(t - h), phase_of_t(t), phase_of_t(t + h),
                                     phase_of_t(t + 2 * h)};
        for (int ix = 0; ix < 10; ++ix) {
            const double x = -xmax + 2 * xmax * ix / 9.0;
            for (int iy = 0; iy < 10; ++iy) {
                const double y = -xmax + 2 * xmax * iy / 9.0;
                auto g = [&](double xx) { return quadratic_kernel(q[2], xx, y, s); };
                const cplx gt = (-quadratic_kernel(q[4], x, y, s) + 8.0 * quadratic_kernel(q[3], x, y, s) -
                                 8.0 * quadratic_kernel(q[1], x, y, s) + quadratic_kernel(q[0], x, y, s)) /
                                (12 * h);
                const cplx gxx = (-g(x + 2 * h) + 16.0 * g(x + h) - 30.0 * g(x) + 16.0 * g(x - h) - g(x - 2 * h)) /
                                 (12 * h * h);
                cplx r = pde.c_t * gt + pde.c_xx(t) * gxx + pde.potential(x, t) * g(x);
                if (pde.c_x) {
                    const cplx gx = (-g(x + 2 * h) + 8.0 * g(x + h) - 8.0 * g(x - h) + g(x - 2 * h)) / (12 * h);
                    r += pde.c_x(x, t) * gx;
                }
                worst = std::max(worst, std::abs(r));
            }
        }
    }
    return worst;
}

inline Pde schrodinger(double kinetic, double sign) {
    return {I, [kinetic](double) { return kinetic; }, {},
            [sign](double x, double t) { return cplx(sign * t * x * x); }};
}

inline Pde momentum_pde(double sign) {
    return {I, [sign](double t) { return sign * t; }, {}, [](double x, double) { return cplx(-0.25 * x * x); }};
}

inline Pde gauge_pde() {
    return {I, [](double) { return 0.25; }, [](double x, double t) { return I * x / t; },
            [](double x, double t) { return t * x * x + I / (2 * t); }};
}

inline Pde oscillator_pde(const FrequencyProfile& p, double m, double hbar) {
    return {I * hbar, [=](double) { return hbar * hbar / (2 * m); }, {},
            [=](double x, double t) { return cplx(-0.5 * m * p.omega_sq(t) * x * x); }};
}

// residual of the coefficient system at 50 interior points, fourth-order central differences
inline double riccati_max(EquationVariant v, const std::function<QuadraticPhase(double)>& f, double t0, double t1,
                          const std::function<double(double)>& w2 = {}) {
    const double h = 5e-4;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double t = t0 + (t1 - t0) * (i + 0.5) / 50;
        const auto p2 = f(t + 2 * h), p1 = f(t + h), m1 = f(t - h), m2 = f(t - 2 * h);
        auto d = [&](double QuadraticPhase::*c) { return (-(p2.*c) + 8 * (p1.*c) - 8 * (m1.*c) + (m2.*c)) / (12 * h); };
        const QuadraticPhase dq{t, d(&QuadraticPhase::mu), d(&QuadraticPhase::alpha), d(&QuadraticPhase::beta),
                                d(&QuadraticPhase::gamma)};
        const auto r = riccati_residual(v, f(t), dq, w2 ? w2(t) : 0.0);
        worst = std::max({worst, std::abs(r.alpha), std::abs(r.beta), std::abs(r.gamma)});
    }
    return worst;
}

using boost::multiprecision::cpp_rational;

struct GaussRational {
    cpp_rational re{0};
    cpp_rational im{0};

    GaussRational() = default;
    GaussRational(int v) : re(v) {}
    GaussRational(const cpp_rational& r) : re(r) {}
    GaussRational(const cpp_rational& r, const cpp_rational& i) : re(r), im(i) {}

    friend GaussRational operator+(const GaussRational& a, const GaussRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const GaussRational& a, const GaussRational& b) { return a.re == b.re && a.im == b.im; }
};

}  // namespace detail

// ---- specfun

inline CheckResult check_wronskian_ab() {
    double worst = 0.0;
    for (double t : detail::linspace(-5.0, 5.0, 200)) {
        const auto s = airy_pair(t);
        const double scale = std::abs(s.a * s.db) + std::abs(s.da * s.b);
        worst = std::max(worst, std::abs(s.a * s.db - s.da * s.b + 1.0) / scale);
    }
    return detail::below("specfun", "wronskian_ab", worst, 1e-12);
}

inline CheckResult check_wronskian_derivs() {
    double worst = 0.0;
    for (double t : detail::linspace(-5.0, 5.0, 200)) {
        const auto s = airy_pair(t);
        const double scale = std::abs(t) * (std::abs(s.a * s.db) + std::abs(s.da * s.b));
        worst = std::max(worst, std::abs(s.da * (t * s.b) - (t * s.a) * s.db - t) / scale);
    }
    return detail::below("specfun", "wronskian_derivs", worst, 1e-12);
}

// 100-digit series against the standard functions mapped to the pair
inline CheckResult check_series_vs_standard() {
    using big = boost::multiprecision::cpp_bin_float_100;
    const big eps("1e-60");
    double worst = 0.0;
    for (double t : detail::linspace(-30.0, 30.0, 121)) {
        const auto ref = airy_series<big>(big(t), eps);
        const auto conv = from_standard_airy(standard_airy(t), t);
        const double a = static_cast<double>(ref.a), b = static_cast<double>(ref.b);
        const double da = static_cast<double>(ref.da), db = static_cast<double>(ref.db);
        const double env = std::hypot(a, b), denv = std::hypot(da, db);
        worst = std::max({worst, std::abs(conv.a - a) / env, std::abs(conv.b - b) / env,
                          std::abs(conv.da - da) / denv, std::abs(conv.db - db) / denv});
    }
    return detail::below("specfun", "series_vs_standard", worst, 1e-9);
}

inline CheckResult check_airy_pair_accuracy() {
    using big = boost::multiprecision::cpp_bin_float_100;
    const big eps("1e-40");
    double worst = 0.0;
    for (double t : detail::linspace(-5.0, 5.0, 101)) {
        const auto ref = airy_series<big>(big(t), eps);
        const auto s = airy_pair(t);
        const double a = static_cast<double>(ref.a), b = static_cast<double>(ref.b);
        const double da = static_cast<double>(ref.da), db = static_cast<double>(ref.db);
        const double env = std::hypot(a, b), denv = std::hypot(da, db);
        worst = std::max({worst, std::abs(s.a - a) / env, std::abs(s.b - b) / env, std::abs(s.da - da) / denv,
                          std::abs(s.db - db) / denv});
    }
    return detail::below("specfun", "airy_pair_accuracy", worst, 1e-12);
}

inline CheckResult check_standard_wronskian() {
    double worst = 0.0;
    for (double t : detail::linspace(-5.0, 3.0, 81)) {
        const auto st = to_standard_airy(airy_pair(t));
        const double scale = std::abs(st.ai * st.dbi) + std::abs(st.dai * st.bi);
        worst = std::max(worst, std::abs(st.ai * st.dbi - st.dai * st.bi - 1.0 / std::numbers::pi) / scale);
    }
    return detail::below("specfun", "standard_wronskian", worst, 1e-12);
}

inline CheckResult check_parity_split_float() {
    double worst = 0.0;
    for (int k = 0; k <= 20; ++k)
        for (int n = k % 2; n <= 20; n += 2)
            for (double zeta : {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0}) {
                const auto direct = hyp2f1_term({k, n, 0.5 * (1 - k - n), {0.5, 0.5 * zeta}});
                const auto split = parity_split_2f1(k, n, zeta);
                worst = std::max(worst, std::abs(split - direct) / std::max(1.0, std::abs(direct)));
            }
    return detail::below("specfun", "parity_split_float", worst, 1e-12);
}

// number of (k, n, zeta) cases where the rational identities fail
inline CheckResult check_clausen_identity(const std::string& suite = "amplitudes") {
    using detail::cpp_rational;
    using detail::GaussRational;
    const std::vector<cpp_rational> zetas = {cpp_rational(0), cpp_rational(1, 2), cpp_rational(1), cpp_rational(2),
                                             cpp_rational(3, 7), cpp_rational(-5, 3)};
    int failures = 0;
    for (const auto& zeta : zetas) {
        const cpp_rational zsq = zeta * zeta;
        const GaussRational arg(cpp_rational(1, 2), zeta / 2);
        for (int k = 0; k <= 8; ++k)
            for (int n = k % 2; n <= 8; n += 2) {
                const auto ps = parity_split<cpp_rational>(k, n, zsq);
                const GaussRational split =
                    ps.odd ? GaussRational(cpp_rational(0), -zeta * ps.coefficient) : GaussRational(ps.coefficient);
                const auto direct =
                    hyp2f1_terminating<cpp_rational, GaussRational>(k, n, cpp_rational(1 - k - n, 2), arg);
                const cpp_rational mod = split.re * split.re + split.im * split.im;
                if (!(direct == split) || clausen_modulus_sq<cpp_rational>(k, n, 1 + zsq) != mod) ++failures;
            }
    }
    return detail::below(suite, "clausen_identity", failures, 0.0);
}

inline CheckResult check_clausen_float() {
    double worst = 0.0;
    for (int k = 0; k <= 20; ++k)
        for (int n = k % 2; n <= 20; n += 2)
            for (double zeta : {0.0, 0.5, 1.0, 2.0}) {
                const double f2 = std::norm(parity_split_2f1(k, n, zeta));
                worst = std::max(worst, std::abs(clausen_modulus_sq(k, n, 1 + zeta * zeta) - f2) / std::max(1.0, f2));
            }
    return detail::below("specfun", "clausen_float", worst, 1e-12);
}

inline CheckResult check_gamma_identities() {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double z = 0.05 + 0.045 * i;
        worst = std::max(worst,
                         std::abs(gamma_fn(z) * gamma_fn(1.0 - z) * std::sin(std::numbers::pi * z) / std::numbers::pi - 1.0));
        const double w = 0.3 + 0.23 * i;
        const double dup =
            gamma_fn(2 * w) / (std::pow(2.0, 2 * w - 1) / std::sqrt(std::numbers::pi) * gamma_fn(w) * gamma_fn(w + 0.5));
        worst = std::max(worst, std::abs(dup - 1.0));
    }
    return detail::below("specfun", "gamma_identities", worst, 1e-13);
}

// ---- coeffs

inline CheckResult check_riccati(EquationVariant v) {
    using V = EquationVariant;
    const std::string name = std::string("riccati_") + to_string(v);
    double worst = 0.0;
    auto green = [v](double t) { return green_coeffs(v, t); };
    switch (v) {
        case V::increasing:
        case V::gauge:
            worst = std::max(detail::riccati_max(v, green, 0.5, 3.0),
                             detail::riccati_max(v, [v](double t) { return general_coeffs(v, 0.3, 1.2, 0.8, 0.1, t); },
                                                 v == V::gauge ? 0.5 : 0.1, 2.0));
            break;
        case V::oscillatory:
            worst = std::max(detail::riccati_max(v, green, 0.5, 2.0),
                             detail::riccati_max(v, [v](double t) { return general_coeffs(v, 0.3, 1.2, 0.8, 0.1, t); },
                                                 0.1, 1.0));
            break;
        case V::momentum_increasing:
        case V::momentum_oscillatory: {
            const double end = v == V::momentum_increasing ? 3.0 : 2.2;
            worst = std::max(detail::riccati_max(v, green, 0.6, end),
                             detail::riccati_max(v, [v](double t) { return general_coeffs(v, 1.1, 0.4, 0.8, 0.1, t); },
                                                 0.1, v == V::momentum_increasing ? 2.0 : 1.0));
            break;
        }
        case V::oscillator_chirp: {
            const OscillatorConfig cfg;
            const double delta = cfg.delta();
            worst = detail::riccati_max(v, [delta](double tau) { return oscillator_coeffs(tau, delta); }, cfg.tau(0.3),
                                        cfg.tau(1.0));
            break;
        }
        case V::oscillator_general: {
            const auto profile = FrequencyProfile::piecewise({{0.0, 1.0, 1.0, 2.0}, {1.0, 2.0, 2.0, 0.5}});
            const auto sol = solve_oscillator(profile, 1.0, 1.0, 1.6);
            worst = detail::riccati_max(v, [&](double t) { return general_oscillator_coeffs(sol, t, GammaMethod::automatic); },
                                        0.3, 1.0, [&](double t) { return profile.omega_sq(t); });
            break;
        }
    }
    return detail::below("coeffs", name, worst, 1e-8);
}

inline CheckResult check_compose_forward() {
    double worst = 0.0;
    for (auto v : {EquationVariant::increasing, EquationVariant::oscillatory, EquationVariant::momentum_increasing,
                   EquationVariant::momentum_oscillatory}) {
        const auto init = general_coeffs(v, 0.4, 1.3, 0.9, -0.3, 0.0);
        for (double t : {0.2, 0.7, 1.2}) {
            const auto got = compose_forward(init, green_coeffs(v, t));
            const auto want = general_coeffs(v, 0.4, 1.3, 0.9, -0.3, t);
            for (auto [g, w] : {std::pair{got.mu, want.mu}, std::pair{got.alpha, want.alpha},
                                std::pair{got.beta, want.beta}, std::pair{got.gamma, want.gamma}})
                worst = std::max(worst, std::abs(g - w) / std::max(1.0, std::abs(w)));
        }
    }
    return detail::below("coeffs", "compose_forward", worst, 1e-10);
}

// ---- propagator

inline CheckResult check_pde(EquationVariant v) {
    using V = EquationVariant;
    using detail::box_residual;
    auto green = [v](double t) { return green_coeffs(v, t); };
    auto general = [v](double c1, double c2) {
        return [=](double t) { return general_coeffs(v, c1, c2, 0.9, -0.3, t); };
    };
    double worst = 0.0;
    switch (v) {
        case V::increasing:
            worst = std::max(box_residual(green, 1.0, detail::schrodinger(0.25, +1), 0.3, 1.5),
                             box_residual(general(0.4, 1.3), 1.0, detail::schrodinger(0.25, +1), 0.2, 1.2));
            break;
        case V::oscillatory:
            worst = std::max(box_residual(green, 1.0, detail::schrodinger(0.25, -1), 0.3, 2.0),
                             box_residual(general(0.4, 1.3), 1.0, detail::schrodinger(0.25, -1), 0.2, 1.0));
            break;
        case V::momentum_increasing:
            worst = std::max(box_residual(green, 1.0, detail::momentum_pde(-1), 0.5, 1.5),
                             box_residual(general(1.3, 0.4), 1.0, detail::momentum_pde(-1), 0.2, 1.2));
            break;
        case V::momentum_oscillatory:
            worst = std::max(box_residual(green, 1.0, detail::momentum_pde(+1), 0.5, 2.0),
                             box_residual(general(1.3, 0.4), 1.0, detail::momentum_pde(+1), 0.2, 1.0));
            break;
        case V::gauge:
            worst = box_residual(green, 1.0, detail::gauge_pde(), 0.3, 1.5);
            break;
        case V::oscillator_chirp: {
            const OscillatorConfig a;
            const OscillatorConfig b{2.0, 0.5, 1.5, 0.8, 2.0};
            worst = std::max(
                box_residual([&](double t) { return oscillator_phase(a, std::min(t, a.T)); }, 0.5,
                             detail::oscillator_pde(a.profile(), a.m, a.hbar), 0.2, 0.99),
                box_residual([&](double t) { return oscillator_phase(b, t); }, b.m / (2 * b.hbar),
                             detail::oscillator_pde(b.profile(), b.m, b.hbar), 0.4, 1.9));
            break;
        }
        case V::oscillator_general: {
            const auto profile = FrequencyProfile::piecewise({{0.0, 0.6, 1.0, 2.5}, {0.6, 2.0, 2.5, 1.5}});
            const auto sol = solve_oscillator(profile, 1.0, 1.0, 1.2);
            worst = box_residual([&](double t) { return general_oscillator_coeffs(sol, t, GammaMethod::automatic); }, 0.5,
                                 detail::oscillator_pde(profile, 1.0, 1.0), 0.2, 1.1);
            break;
        }
    }
    return detail::below("propagator", std::string("pde_") + to_string(v), worst, 1e-5);
}

// G * K(., y, 0) = K(x, y, t) and mu(0)|beta(0)| int K(x, z, t) conj K(y, z, 0) dz = G(x, y, t)
inline CheckResult check_composition() {
    using detail::I;
    struct Params {
        double c1, c2, b0, g0;
    };
    double worst = 0.0;
    for (auto v : {EquationVariant::increasing, EquationVariant::oscillatory})
        for (auto p : {Params{0.4, 1.3, 0.9, -0.3}, Params{1.0, 2.0, -0.5, 0.25}})
            for (double t : {0.3, 0.8}) {
                const auto g = green_coeffs(v, t);
                const auto k0 = general_coeffs(v, p.c1, p.c2, p.b0, p.g0, 0.0);
                const auto kt = general_coeffs(v, p.c1, p.c2, p.b0, p.g0, t);
                const cplx ng = std::sqrt(cplx(0.0, 2 * std::numbers::pi * g.mu));
                const cplx n0 = std::sqrt(cplx(0.0, 2 * std::numbers::pi * k0.mu));
                const cplx nt = std::sqrt(cplx(0.0, 2 * std::numbers::pi * kt.mu));
                for (double x : {-0.7, 0.4})
                    for (double y : {-0.2, 0.9}) {
                        auto f = [&](cplx z) {
                            return std::exp(I * (g.alpha * x * x + g.beta * x * z + g.gamma * z * z + k0.alpha * z * z +
                                                 k0.beta * z * y + k0.gamma * y * y)) /
                                   (ng * n0);
                        };
                        const cplx fwd = detail::fresnel_line_integral(f, g.gamma + k0.alpha, g.beta * x + k0.beta * y);
                        worst = std::max(worst, std::abs(fwd - quadratic_kernel(kt, x, y)));
                        auto h = [&](cplx z) {
                            return std::exp(I * (kt.alpha * x * x + kt.beta * x * z + kt.gamma * z * z -
                                                 k0.alpha * y * y - k0.beta * y * z - k0.gamma * z * z)) /
                                   (nt * std::conj(n0));
                        };
                        const cplx inv = k0.mu * std::abs(k0.beta) *
                                         detail::fresnel_line_integral(h, kt.gamma - k0.gamma, kt.beta * x - k0.beta * y);
                        worst = std::max(worst, std::abs(inv - quadratic_kernel(g, x, y)));
                    }
            }
    return detail::below("propagator", "composition", worst, 1e-6);
}

// relative modulus and phase mismatch at t = 1e-3 on |x|, |y| <= 2
inline CheckResult check_free_particle_limit() {
    const OscillatorConfig cfg;
    const double t = 1e-3;
    double worst = 0.0;
    for (double x : detail::linspace(-2.0, 2.0, 17))
        for (double y : detail::linspace(-2.0, 2.0, 17)) {
            const cplx g = oscillator_green(x, y, t, cfg), f = free_propagator(x, y, t);
            worst = std::max({worst, std::abs(std::abs(g) / std::abs(f) - 1.0), std::abs(std::arg(g / f))});
        }
    return detail::below("propagator", "free_particle_limit", worst, 1e-2);
}

inline CheckResult check_chirp_vs_general() {
    const OscillatorConfig cfg;
    const auto sol = solve_oscillator(cfg.profile(), cfg.m, cfg.hbar, cfg.T);
    double worst = 0.0;
    for (double t : {0.25, 0.5, 0.75, 1.0})
        for (double x : detail::linspace(-2.0, 2.0, 5))
            for (double y : detail::linspace(-2.0, 2.0, 5))
                worst = std::max(worst, std::abs(general_green(x, y, t, sol, GammaMethod::automatic) -
                                                 oscillator_green(x, y, t, cfg)));
    return detail::below("propagator", "chirp_vs_general", worst, 1e-6);
}

// smallest observed order of the error of int G(x, y, t) exp(-y^2) dy - exp(-x^2) over t = 1e-2, 1e-3, 1e-4
inline CheckResult check_delta_limit() {
    using detail::I;
    auto err = [](double t) {
        const auto q = green_coeffs(EquationVariant::increasing, t);
        double worst = 0.0;
        for (double x : detail::linspace(-2.0, 2.0, 17)) {
            auto f = [&](cplx y) {
                return std::exp(I * (q.alpha * x * x + q.beta * x * y + q.gamma * y * y) - y * y) /
                       std::sqrt(cplx(0.0, 2 * std::numbers::pi * q.mu));
            };
            const cplx psi = detail::fresnel_line_integral(f, cplx(q.gamma, 1.0), q.beta * x);
            worst = std::max(worst, std::abs(psi - std::exp(-x * x)));
        }
        return worst;
    };
    const double e2 = err(1e-2), e3 = err(1e-3), e4 = err(1e-4);
    const double order = std::min(std::log10(e2 / e3), std::log10(e3 / e4));
    return {"propagator", "delta_limit_order", std::isfinite(order) && order >= 0.9, order, 0.9};
}

// ---- evolve

inline CheckResult check_nls_residual(double s) {
    const double c1 = 0.4, c2 = 1.3, b0 = 0.9, g0 = -0.3, y = 0.5, h = 1e-3;
    const NlsParams p{s, 0.7, 0.2, 0.4};
    auto psi = [&](double x, double t) { return nls_solution(p, c1, c2, b0, g0, x, y, t); };
    double worst = 0.0;
    for (double t : {0.2, 0.6, 1.0, 1.4})
        for (double x : {-1.0, -0.4, 0.0, 0.7, 1.2}) {
            const cplx v = psi(x, t);
            const cplx pt = (-psi(x, t + 2 * h) + 8.0 * psi(x, t + h) - 8.0 * psi(x, t - h) + psi(x, t - 2 * h)) / (12 * h);
            const cplx pxx =
                (-psi(x + 2 * h, t) + 16.0 * psi(x + h, t) - 30.0 * v + 16.0 * psi(x - h, t) - psi(x - 2 * h, t)) /
                (12 * h * h);
            const auto sa = airy_pair(t);
            const double dmu = c1 * sa.da + c2 * sa.db;
            const cplx r = detail::I * pt + 0.25 * pxx + t * x * x * v - p.coupling * dmu * std::pow(std::norm(v), s) * v;
            worst = std::max(worst, std::abs(r));
        }
    return detail::below("evolve", s == 1.0 ? "nls_residual_s1" : "nls_residual_s_half", worst, 1e-4);
}

inline CheckResult check_nls_kappa() {
    const double c1 = 0.4, c2 = 1.3;
    auto mu_of_t = [&](double t) {
        const auto s = airy_pair(t);
        return std::pair{c1 * s.a + c2 * s.b, c1 * s.da + c2 * s.db};
    };
    double worst = 0.0;
    for (double s : {0.0, 0.5, 1.0, 1.5, 3.0})
        for (double t : {0.3, 1.0, 2.0}) {
            const NlsParams p{s, 0.7, 0.2, 0.0};
            worst = std::max(worst, std::abs(nls_kappa(p, mu_of_t, t) - nls_kappa_closed(p, c2, mu_of_t(t).first)));
        }
    return detail::below("evolve", "nls_kappa_quadrature", worst, 1e-9);
}

inline CheckResult check_cauchy_eigenstates() {
    const OscillatorConfig cfg;
    double worst = 0.0;
    for (int n = 0; n <= 3; ++n) {
        const auto phi = sample_eigenstate(n, cfg.omega0, cfg.m, cfg.hbar, -12.0, 12.0, 801);
        for (double t : {0.4, 1.0}) {
            const auto psi = solve_cauchy(cfg, phi, t);
            const auto exact = evolve_eigenstate_analytic(n, t, cfg);
            for (std::size_t i = 0; i < psi.n_points(); ++i)
                worst = std::max(worst, std::abs(psi.values[i] - exact(psi.x(i))));
        }
    }
    return detail::below("evolve", "cauchy_eigenstates", worst, 1e-6);
}

inline CheckResult check_analytic_norm() {
    using gk = boost::math::quadrature::gauss_kronrod<double, 61>;
    double worst = 0.0;
    for (const OscillatorConfig cfg : {OscillatorConfig{}, OscillatorConfig{2.0, 0.5, 1.5, 0.8, 2.0}})
        for (double frac : {0.25, 1.0})
            for (int n : {0, 1, 4, 9}) {
                const auto psi = evolve_eigenstate_analytic(n, frac * cfg.T, cfg);
                const double norm = gk::integrate([&](double x) { return std::norm(psi(x)); }, -15.0, 15.0, 25, 1e-13);
                worst = std::max(worst, std::abs(norm - 1.0));
            }
    return detail::below("evolve", "analytic_norm", worst, 1e-8);
}

// ---- amplitudes

inline CheckResult check_unitarity_chirp() {
    const auto table = transition_table(OscillatorConfig{});
    double worst = 0.0;
    for (int n = 0; n <= 4; ++n) worst = std::max(worst, table.unitarity_defect[n]);
    return detail::below("amplitudes", "unitarity_chirp", worst, 1e-8);
}

inline CheckResult check_unitarity_sudden() {
    double worst = 0.0;
    for (double w1 : {2.0, 10.0}) {
        const auto table = sudden_table(1.0, w1);
        for (int n = 0; n <= 4; ++n) worst = std::max(worst, table.unitarity_defect[n]);
    }
    return detail::below("amplitudes", "unitarity_sudden", worst, 1e-8);
}

inline CheckResult check_odd_parity_zero() {
    const auto table = transition_table(OscillatorConfig{});
    double worst = 0.0;
    for (int k = 0; k <= table.K_max; ++k)
        for (int n = (k + 1) % 2; n <= table.K_max; n += 2) worst = std::max(worst, std::abs(table.at(k, n)));
    return detail::below("amplitudes", "odd_parity_zero", worst, 0.0);
}

// |c00|^2 of the sudden limit against the squared Gaussian overlap, w1/w0 in {2, 5, 10}
inline CheckResult check_sudden_ground_overlap() {
    using gk = boost::math::quadrature::gauss_kronrod<double, 61>;
    double worst = 0.0;
    for (double w1 : {2.0, 5.0, 10.0}) {
        const double w0 = 1.0;
        const double ov = gk::integrate(
            [&](double x) { return std::pow(w0 * w1, 0.25) / std::sqrt(std::numbers::pi) * std::exp(-0.5 * (w0 + w1) * x * x); },
            -16.0, 16.0, 15, 1e-15);
        const double quad = ov * ov;
        worst = std::max({worst, std::abs(std::norm(sudden_amplitude(0, 0, w0, w1)) - quad),
                          std::abs(2.0 * std::sqrt(w0 * w1) / (w0 + w1) - quad)});
    }
    return detail::below("amplitudes", "sudden_ground_overlap", worst, 1e-10);
}

inline CheckResult check_negative_binomial() {
    double worst = 0.0;
    for (const OscillatorConfig cfg : {OscillatorConfig{}, OscillatorConfig{2.0, 0.5, 1.5, 0.8, 2.0},
                                       OscillatorConfig{1.0, 1.0, 1.0, 3.0, 1.2}}) {
        const auto q = oscillator_phase(cfg, cfg.T);
        double s0 = 0.0, s1 = 0.0;
        for (int k = 0; k <= 400; ++k) {
            s0 += ground_column_probability(k, q, cfg.omega0, cfg.omega1);
            s1 += first_column_probability(k, q, cfg.omega0, cfg.omega1);
        }
        worst = std::max({worst, std::abs(s0 - 1.0), std::abs(s1 - 1.0)});
    }
    for (double w1 : {2.0, 10.0}) {
        double even = 0.0, odd = 0.0;
        for (int k = 0; k < 2000; ++k) {
            even += std::norm(sudden_amplitude(2 * k, 0, 1.0, w1));
            odd += std::norm(sudden_amplitude(2 * k + 1, 1, 1.0, w1));
        }
        worst = std::max({worst, std::abs(even - 1.0), std::abs(odd - 1.0)});
    }
    return detail::below("amplitudes", "negative_binomial_closure", worst, 1e-10);
}

inline CheckResult check_probability_vs_modulus() {
    double worst = 0.0;
    for (const OscillatorConfig cfg : {OscillatorConfig{}, OscillatorConfig{2.0, 0.5, 1.5, 0.8, 2.0}})
        for (int n = 0; n <= 12; ++n)
            for (int k = n % 2; k <= 12; k += 2)
                worst = std::max(worst, std::abs(transition_probability(k, n, cfg) - std::norm(transition_amplitude(k, n, cfg))));
    return detail::below("amplitudes", "probability_vs_modulus", worst, 1e-10);
}

// closed-form amplitudes against <Psi_k(omega1), psi_n(T)> by quadrature of the evolved state
inline CheckResult check_amplitude_overlap() {
    using gk = boost::math::quadrature::gauss_kronrod<double, 61>;
    const OscillatorConfig cfg;
    double worst = 0.0;
    for (int n = 0; n <= 4; ++n) {
        const auto psi = evolve_eigenstate_analytic(n, cfg.T, cfg);
        for (int k = n % 2; k <= 6; k += 2) {
            auto f = [&](double x) { return eigenstate(k, cfg.omega1, cfg.m, cfg.hbar, x) * psi(x); };
            const cplx want{gk::integrate([&](double x) { return f(x).real(); }, -14.0, 14.0, 15, 1e-14),
                            gk::integrate([&](double x) { return f(x).imag(); }, -14.0, 14.0, 15, 1e-14)};
            worst = std::max(worst, std::abs(transition_amplitude(k, n, cfg) - want));
        }
    }
    return detail::below("amplitudes", "amplitude_overlap", worst, 1e-10);
}

// |c_kn| = |T^j_{lambda lambda'}| and c/T constant along each column
inline CheckResult check_bargmann_modulus() {
    double worst = 0.0;
    for (const OscillatorConfig cfg : {OscillatorConfig{}, OscillatorConfig{2.0, 0.5, 1.5, 0.8, 2.0},
                                       OscillatorConfig{1.0, 1.0, 1.0, 3.0, 1.2}}) {
        const auto q = oscillator_phase(cfg, cfg.T);
        const auto ang = bargmann_angles(q, cfg.omega0, cfg.omega1);
        for (int n = 0; n <= 6; ++n) {
            cplx first = 0.0;
            for (int k = n % 2; k <= 6; k += 2) {
                const cplx c = transition_amplitude(k, n, cfg);
                const cplx T = bargmann_T(quantum_numbers(k, n), ang);
                worst = std::max(worst, std::abs(std::abs(T) - std::abs(c)));
                if (first == 0.0) first = c / T;
                worst = std::max(worst, std::abs(c / T - first));
            }
        }
    }
    return detail::below("amplitudes", "bargmann_modulus", worst, 1e-8);
}

inline CheckResult check_bargmann_integral() {
    double worst = 0.0;
    for (double tau : {0.4, 1.1, 2.3})
        for (int k = 0; k <= 6; ++k)
            for (int n = k % 2; n <= 6; n += 2)
                worst = std::max(worst, std::abs(bargmann_integral(k, n, tau) - bargmann_t(quantum_numbers(k, n), tau)));
    return detail::below("amplitudes", "bargmann_integral", worst, 1e-8);
}

inline CheckResult check_bargmann_unitarity() {
    double worst = 0.0;
    for (double tau : {0.3, 1.2, 2.5})
        for (int parity = 0; parity <= 1; ++parity)
            for (int r = 0; r <= 4; ++r)
                for (int rp = r; rp <= 4; ++rp) {
                    double s = 0.0;
                    for (int u = 0; u <= 2000; ++u) {
                        const double term = bargmann_t(quantum_numbers(2 * r + parity, 2 * u + parity), tau) *
                                            bargmann_t(quantum_numbers(2 * rp + parity, 2 * u + parity), tau);
                        s += term;
                        if (u > 50 && std::abs(term) < 1e-20) break;
                    }
                    worst = std::max(worst, std::abs(s - (r == rp ? 1.0 : 0.0)));
                }
    return detail::below("amplitudes", "bargmann_unitarity", worst, 1e-8);
}

// ---- oracle

inline CheckResult check_classical_wronskian() {
    const auto profile = FrequencyProfile::piecewise({{0.0, 1.0, 1.0, 4.0}, {1.0, 3.0, 4.0, -0.5}});
    const auto grid = uniform_grid(0.0, 3.0, 601);
    const auto u = integrate_classical(profile, 0.3, 1.2, grid), v = integrate_classical(profile, -1.0, 0.4, grid);
    const double w0 = 0.3 * 0.4 - 1.2 * (-1.0);
    double drift = 0.0;
    for (double t : grid) drift = std::max(drift, std::abs(wronskian(u, v, t) - w0));
    return detail::below("oracle", "classical_wronskian", drift, 1e-10);
}

inline CheckResult check_gram_identity() {
    std::vector<GridWaveFunction> basis;
    for (int n = 0; n <= 8; ++n) basis.push_back(sample_eigenstate(n, 1.0, 1.0, 1.0, -12.0, 12.0, 1024));
    const auto g = gram_matrix(basis);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) worst = std::max(worst, std::abs(g[i][j] - (i == j ? 1.0 : 0.0)));
    return detail::below("oracle", "gram_identity", worst, 1e-8);
}

inline CheckResult check_stepper_norm() {
    const OscillatorConfig cfg;
    const auto psi0 = sample_eigenstate(2, 1.0, 1.0, 1.0, -12.0, 12.0, 1024);
    const auto psi = unitary_stepper(cfg.profile(), psi0, cfg.T, 1e-4);
    return detail::below("oracle", "stepper_norm", std::abs(l2_norm_sq(psi) - l2_norm_sq(psi0)), 1e-10);
}

// stepper projections against the closed-form probabilities, k, n <= 6, 1024 points, dt = 1e-4
inline CheckResult check_stepper_projections() {
    const OscillatorConfig cfg;
    const auto oracle = oracle_amplitudes(cfg.profile(), cfg.omega0, cfg.omega1, cfg.T, 6);
    double worst = 0.0;
    for (int n = 0; n <= 6; ++n)
        for (int k = 0; k <= 6; ++k)
            worst = std::max(worst, std::abs(std::norm(oracle.at(k, n)) - transition_probability(k, n, cfg)));
    return detail::below("oracle", "stepper_projections", worst, 1e-3);
}

inline CheckResult check_bailey() {
    double worst = 0.0;
    for (auto lam2 : {cplx(1.0, 0.0), cplx(1.2, 0.7)})
        for (auto [a, b] : {std::pair{0.5, 1.5}, std::pair{1.3, -1.1}})
            for (int m = 0; m <= 6; ++m)
                for (int n = m % 2; n <= 6; n += 2) {
                    const cplx want = bailey_quadrature(m, n, a, b, lam2);
                    worst = std::max(worst, std::abs(bailey_closed(m, n, a, b, lam2) - want) / std::max(1.0, std::abs(want)));
                }
    return detail::below("oracle", "bailey_integral", worst, 1e-8);
}

inline const std::vector<Check>& registry() {
    using V = EquationVariant;
    static const std::vector<Check> checks = [] {
        std::vector<Check> c = {
            {"specfun", "wronskian_ab", check_wronskian_ab},
            {"specfun", "wronskian_derivs", check_wronskian_derivs},
            {"specfun", "series_vs_standard", check_series_vs_standard},
            {"specfun", "airy_pair_accuracy", check_airy_pair_accuracy},
            {"specfun", "standard_wronskian", check_standard_wronskian},
            {"specfun", "parity_split_float", check_parity_split_float},
            {"specfun", "clausen_float", check_clausen_float},
            {"specfun", "clausen_identity", [] { return check_clausen_identity("specfun"); }},
            {"specfun", "gamma_identities", check_gamma_identities},
        };
        for (auto v : {V::increasing, V::oscillatory, V::momentum_increasing, V::momentum_oscillatory, V::gauge,
                       V::oscillator_chirp, V::oscillator_general})
            c.push_back({"coeffs", std::string("riccati_") + to_string(v), [v] { return check_riccati(v); }});
        c.push_back({"coeffs", "compose_forward", check_compose_forward});
        for (auto v : {V::increasing, V::oscillatory, V::momentum_increasing, V::momentum_oscillatory, V::gauge,
                       V::oscillator_chirp, V::oscillator_general})
            c.push_back({"propagator", std::string("pde_") + to_string(v), [v] { return check_pde(v); }});
        const std::vector<Check> rest = {
            {"propagator", "composition", check_composition},
            {"propagator", "free_particle_limit", check_free_particle_limit},
            {"propagator", "chirp_vs_general", check_chirp_vs_general},
            {"propagator", "delta_limit_order", check_delta_limit},
            {"evolve", "nls_residual_s_half", [] { return check_nls_residual(0.5); }},
            {"evolve", "nls_residual_s1", [] { return check_nls_residual(1.0); }},
            {"evolve", "nls_kappa_quadrature", check_nls_kappa},
            {"evolve", "cauchy_eigenstates", check_cauchy_eigenstates},
            {"evolve", "analytic_norm", check_analytic_norm},
            {"amplitudes", "unitarity_chirp", check_unitarity_chirp},
            {"amplitudes", "unitarity_sudden", check_unitarity_sudden},
            {"amplitudes", "odd_parity_zero", check_odd_parity_zero},
            {"amplitudes", "sudden_ground_overlap", check_sudden_ground_overlap},
            {"amplitudes", "clausen_identity", [] { return check_clausen_identity("amplitudes"); }},
            {"amplitudes", "negative_binomial_closure", check_negative_binomial},
            {"amplitudes", "probability_vs_modulus", check_probability_vs_modulus},
            {"amplitudes", "amplitude_overlap", check_amplitude_overlap},
            {"amplitudes", "bargmann_modulus", check_bargmann_modulus},
            {"amplitudes", "bargmann_integral", check_bargmann_integral},
            {"amplitudes", "bargmann_unitarity", check_bargmann_unitarity},
            {"oracle", "classical_wronskian", check_classical_wronskian},
            {"oracle", "gram_identity", check_gram_identity},
            {"oracle", "stepper_norm", check_stepper_norm},
            {"oracle", "stepper_projections", check_stepper_projections},
            {"oracle", "bailey_integral", check_bailey},
        };
        c.insert(c.end(), rest.begin(), rest.end());
        return c;
    }();
    return checks;
}

// A check that throws is reported as failed with a NaN measurement.
inline CheckResult run_check(const Check& c) {
    try {
        return c.run();
    } catch (const std::exception&) {
        return {c.suite, c.name, false, std::numeric_limits<double>::quiet_NaN(), 0.0};
    }
}

inline std::vector<CheckResult> run_suite(const std::string& suite) {
    if (suite != "all" && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
        throw ParameterError("unknown suite '" + suite + "'");
    std::vector<CheckResult> out;
    for (const auto& c : registry())
        if (suite == "all" || c.suite == suite) out.push_back(run_check(c));
    return out;
}

inline CheckResult run_named(const std::string& suite, const std::string& name) {
    for (const auto& c : registry())
        if (c.suite == suite && c.name == name) return run_check(c);
    throw ParameterError("unknown check '" + suite + "/" + name + "'");
}

}  // namespace qprop::verify
