#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "oracles.hpp"
#include "qprop/propagator.hpp"

using namespace qprop;
using oracle_ref::diff1;
using oracle_ref::diff2;

namespace {

// Residual of c_t G_t + c_xx G_xx + c_x(x,t) G_x + V(x,t) G at each box point, with the
// kernel phase computed once per time. Returns the largest modulus.
struct Pde {
    cplx c_t;
    std::function<double(double)> c_xx;
    std::function<cplx(double, double)> c_x;
    std::function<cplx(double, double)> potential;
};

double box_residual(const std::function<QuadraticPhase(double)>& phase_of_t, double s, const Pde& pde,
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
                auto g_of_x = [&](double xx) { return quadratic_kernel(q[2], xx, y, s); };
                const cplx g = g_of_x(x);
                const cplx gt = (-quadratic_kernel(q[4], x, y, s) + 8.0 * quadratic_kernel(q[3], x, y, s) -
                                 8.0 * quadratic_kernel(q[1], x, y, s) + quadratic_kernel(q[0], x, y, s)) /
                                (12 * h);
                cplx r = pde.c_t * gt + pde.c_xx(t) * diff2(g_of_x, x, h) + pde.potential(x, t) * g;
                if (pde.c_x) r += pde.c_x(x, t) * diff1(g_of_x, x, h);
                worst = std::max(worst, std::abs(r));
            }
        }
    }
    return worst;
}

const cplx I(0.0, 1.0);

Pde schrodinger(double kinetic, double sign) {
    return {I, [kinetic](double) { return kinetic; }, {},
            [sign](double x, double t) { return cplx(sign * t * x * x); }};
}

Pde momentum(double sign) {
    return {I, [sign](double t) { return sign * t; }, {}, [](double x, double) { return cplx(-0.25 * x * x); }};
}

Pde gauge_pde() {
    return {I, [](double) { return 0.25; }, [](double x, double t) { return I * x / t; },
            [](double x, double t) { return t * x * x + I / (2 * t); }};
}

Pde oscillator_pde(const FrequencyProfile& p, double m, double hbar) {
    return {I * hbar, [=](double) { return hbar * hbar / (2 * m); }, {},
            [=](double x, double t) { return cplx(-0.5 * m * p.omega_sq(t) * x * x); }};
}

auto green_phase(EquationVariant v) {
    return [v](double t) { return green_coeffs(v, t); };
}

}  // namespace

TEST(Greens, ModulusIncreasing) {
    for (double t : {0.1, 0.7, 2.0}) {
        const double a = airy_pair(t).a;
        for (double x : {-1.0, 0.3, 2.0})
            for (double y : {-0.5, 1.5})
                EXPECT_NEAR(std::abs(greens(EquationVariant::increasing, x, y, t)), 1.0 / std::sqrt(std::numbers::pi * a),
                            1e-13);
    }
}

TEST(Greens, PdeResidualAllVariants) {
    using V = EquationVariant;
    EXPECT_LT(box_residual(green_phase(V::increasing), 1.0, schrodinger(0.25, +1), 0.3, 1.5), 1e-5);
    EXPECT_LT(box_residual(green_phase(V::oscillatory), 1.0, schrodinger(0.25, -1), 0.3, 2.0), 1e-5);
    EXPECT_LT(box_residual(green_phase(V::momentum_increasing), 1.0, momentum(-1), 0.5, 1.5), 1e-5);
    EXPECT_LT(box_residual(green_phase(V::momentum_oscillatory), 1.0, momentum(+1), 0.5, 2.0), 1e-5);
    EXPECT_LT(box_residual(green_phase(V::gauge), 1.0, gauge_pde(), 0.3, 1.5), 1e-5);
}

TEST(Greens, GeneralKernelResiduals) {
    using V = EquationVariant;
    auto general = [](V v) {
        return [v](double t) { return general_coeffs(v, 0.4, 1.3, 0.9, -0.3, t); };
    };
    EXPECT_LT(box_residual(general(V::increasing), 1.0, schrodinger(0.25, +1), 0.2, 1.2), 1e-5);
    EXPECT_LT(box_residual(general(V::oscillatory), 1.0, schrodinger(0.25, -1), 0.2, 1.0), 1e-5);
    auto mom = [](V v) {
        return [v](double t) { return general_coeffs(v, 1.3, 0.4, 0.9, -0.3, t); };
    };
    EXPECT_LT(box_residual(mom(V::momentum_increasing), 1.0, momentum(-1), 0.2, 1.2), 1e-5);
    EXPECT_LT(box_residual(mom(V::momentum_oscillatory), 1.0, momentum(+1), 0.2, 1.0), 1e-5);
}

TEST(Greens, OscillatoryNeedsTheQuadraticXTerm) {
    // without the alpha x^2 term the kernel no longer solves the equation
    auto no_x2 = [](double t) {
        auto q = green_coeffs(EquationVariant::oscillatory, t);
        q.alpha = 0.0;
        return q;
    };
    EXPECT_GT(box_residual(no_x2, 1.0, schrodinger(0.25, -1), 0.3, 2.0), 1e-2);
}

TEST(Greens, DeltaLimit) {
    auto smoothed_error = [](double t) {
        const auto q = green_coeffs(EquationVariant::increasing, t);
        double worst = 0.0;
        for (double x = -2.0; x <= 2.0 + 1e-12; x += 0.25) {
            auto f = [&](cplx y) {
                return std::exp(I * (q.alpha * x * x + q.beta * x * y + q.gamma * y * y) - y * y) /
                       std::sqrt(cplx(0.0, 2 * std::numbers::pi * q.mu));
            };
            const cplx psi = oracle_ref::fresnel_line_integral(f, cplx(q.gamma, 1.0), q.beta * x);
            worst = std::max(worst, std::abs(psi - std::exp(-x * x)));
        }
        return worst;
    };
    const double e2 = smoothed_error(1e-2), e3 = smoothed_error(1e-3), e4 = smoothed_error(1e-4);
    EXPECT_LT(e3, 1e-3);
    EXPECT_GE(std::log10(e2 / e3), 0.9);
    EXPECT_GE(std::log10(e3 / e4), 0.9);
}

TEST(KernelK, InitialValueIsAQuadraticPhaseGaussian) {
    const double c1 = 0.4, c2 = 1.3, b0 = 0.9, g0 = -0.3;
    for (double x : {-1.0, 0.5})
        for (double y : {0.0, 2.0}) {
            const cplx want = std::exp(I * (c1 / c2 * x * x + b0 * x * y + g0 * y * y)) /
                              std::sqrt(cplx(0.0, 2 * std::numbers::pi * c2));
            EXPECT_LT(std::abs(kernel_K(EquationVariant::increasing, c1, c2, b0, g0, x, y, 0.0) - want), 1e-15);
        }
}

TEST(KernelK, CompositionIdentities) {
    struct Params {
        double c1, c2, b0, g0;
    };
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
                        // G * K(., y, 0) = K(x, y, t)
                        auto f = [&](cplx z) {
                            return std::exp(I * (g.alpha * x * x + g.beta * x * z + g.gamma * z * z + k0.alpha * z * z +
                                                 k0.beta * z * y + k0.gamma * y * y)) /
                                   (ng * n0);
                        };
                        const double A = g.gamma + k0.alpha;
                        const cplx lhs = oracle_ref::fresnel_line_integral(f, A, g.beta * x + k0.beta * y);
                        EXPECT_LT(std::abs(lhs - quadratic_kernel(kt, x, y)), 1e-6);

                        // mu(0) |beta(0)| int K(x, z, t) conj K(y, z, 0) dz = G(x, y, t)
                        auto h = [&](cplx z) {
                            return std::exp(I * (kt.alpha * x * x + kt.beta * x * z + kt.gamma * z * z -
                                                 k0.alpha * y * y - k0.beta * y * z - k0.gamma * z * z)) /
                                   (nt * std::conj(n0));
                        };
                        const double B = kt.gamma - k0.gamma;
                        const cplx inv =
                            k0.mu * std::abs(k0.beta) *
                            oracle_ref::fresnel_line_integral(h, B, kt.beta * x - k0.beta * y);
                        EXPECT_LT(std::abs(inv - quadratic_kernel(g, x, y)), 1e-6);
                    }
            }
}

TEST(Oscillator, FreeParticleLimit) {
    const OscillatorConfig cfg;
    const double t = 1e-3;
    for (double x = -2.0; x <= 2.0 + 1e-12; x += 0.5)
        for (double y = -2.0; y <= 2.0 + 1e-12; y += 0.5) {
            const cplx g = oscillator_green(x, y, t, cfg), f = free_propagator(x, y, t);
            EXPECT_LT(std::abs(std::abs(g) / std::abs(f) - 1.0), 1e-2);
            EXPECT_LT(std::abs(std::arg(g / f)), 1e-2);
        }
    EXPECT_THROW(oscillator_green(0, 0, 0.0, cfg), CausticError);
    EXPECT_THROW(oscillator_green(0, 0, 1.2, cfg), DomainError);
}

TEST(Oscillator, PdeResidual) {
    const OscillatorConfig cfg;
    auto phase = [&](double t) { return oscillator_phase(cfg, std::min(t, cfg.T)); };
    const Pde pde = oscillator_pde(cfg.profile(), cfg.m, cfg.hbar);
    EXPECT_LT(box_residual(phase, 0.5, pde, 0.2, 0.99), 1e-5);
    OscillatorConfig other{2.0, 0.5, 1.5, 0.8, 2.0};
    auto phase2 = [&](double t) { return oscillator_phase(other, t); };
    EXPECT_LT(box_residual(phase2, other.m / (2 * other.hbar), oscillator_pde(other.profile(), 2.0, 0.5), 0.4,
                           1.9),
              1e-5);
}

TEST(GeneralGreen, ConstantOmegaTextbook) {
    for (auto [m, hbar, w] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{2.0, 0.5, 1.7}}) {
        const auto sol = solve_oscillator(FrequencyProfile::constant(w), m, hbar, 1.7);
        for (double t : {0.1, 0.6, 1.2, 1.7}) {
            if (w * t > 0.95 * std::numbers::pi) continue;
            const double s = std::sin(w * t), c = std::cos(w * t);
            for (double x : {-1.5, 0.2})
                for (double y : {-0.4, 1.1}) {
                    const cplx want = std::sqrt(cplx(m * w / (2 * std::numbers::pi * hbar * s), 0.0)) /
                                      std::sqrt(I) *
                                      std::exp(I * m * w / (2 * hbar * s) * ((x * x + y * y) * c - 2 * x * y));
                    EXPECT_LT(std::abs(general_green(x, y, t, sol, GammaMethod::automatic) - want), 1e-8);
                }
        }
    }
}

TEST(GeneralGreen, MatchesChirpAndFreeLimit) {
    const OscillatorConfig cfg;
    const auto sol = solve_oscillator(cfg.profile(), cfg.m, cfg.hbar, cfg.T);
    for (double t : {0.25, 0.5, 0.75, 1.0})
        for (double x = -2.0; x <= 2.0; x += 1.0)
            for (double y = -2.0; y <= 2.0; y += 1.0)
                EXPECT_LT(std::abs(general_green(x, y, t, sol, GammaMethod::automatic) - oscillator_green(x, y, t, cfg)),
                          1e-6);
    for (double x : {-1.0, 0.5})
        for (double y : {-2.0, 1.0}) {
            const cplx g = general_green(x, y, 1e-3, sol), f = free_propagator(x, y, 1e-3);
            EXPECT_LT(std::abs(g / f - 1.0), 1e-2);
        }
}

TEST(GeneralGreen, PdeResidual) {
    const OscillatorConfig cfg{1.0, 1.0, 1.0, 2.0, 1.0};
    const auto sol = solve_oscillator(cfg.profile(), cfg.m, cfg.hbar, 1.2);
    auto phase = [&](double t) { return general_oscillator_coeffs(sol, t, GammaMethod::automatic); };
    EXPECT_LT(box_residual(phase, 0.5, oscillator_pde(cfg.profile(), 1.0, 1.0), 0.2, 1.1), 1e-5);
}

TEST(Batch, Layout) {
    const std::vector<double> xs{-1.0, 0.0, 0.5}, ys{0.2, 0.7}, ts{0.4, 0.9};
    const auto grid = evaluate_grid(xs, ys, ts, green_phase(EquationVariant::increasing));
    ASSERT_EQ(grid.values.size(), 12u);
    for (std::size_t it = 0; it < ts.size(); ++it)
        for (std::size_t iy = 0; iy < ys.size(); ++iy)
            for (std::size_t ix = 0; ix < xs.size(); ++ix) {
                EXPECT_EQ(grid.values[(it * ys.size() + iy) * xs.size() + ix],
                          greens(EquationVariant::increasing, xs[ix], ys[iy], ts[it]));
                EXPECT_EQ(grid.at(it, iy, ix), grid.values[(it * 2 + iy) * 3 + ix]);
            }
}
