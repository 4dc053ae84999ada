#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "classical.hpp"
#include "errors.hpp"
#include "oscillator.hpp"
#include "specfun.hpp"

namespace qprop {

enum class EquationVariant {
    increasing,
    oscillatory,
    momentum_increasing,
    momentum_oscillatory,
    gauge,
    oscillator_chirp,
    oscillator_general
};

inline const char* to_string(EquationVariant v) {
    switch (v) {
        case EquationVariant::increasing: return "increasing";
        case EquationVariant::oscillatory: return "oscillatory";
        case EquationVariant::momentum_increasing: return "momentum_increasing";
        case EquationVariant::momentum_oscillatory: return "momentum_oscillatory";
        case EquationVariant::gauge: return "gauge";
        case EquationVariant::oscillator_chirp: return "oscillator_chirp";
        case EquationVariant::oscillator_general: return "oscillator_general";
    }
    return "?";
}

inline EquationVariant variant_from_string(const std::string& s) {
    for (auto v : {EquationVariant::increasing, EquationVariant::oscillatory, EquationVariant::momentum_increasing,
                   EquationVariant::momentum_oscillatory, EquationVariant::gauge, EquationVariant::oscillator_chirp,
                   EquationVariant::oscillator_general})
        if (s == to_string(v)) return v;
    throw ParameterError("unknown equation variant '" + s + "'");
}

inline bool is_airy_variant(EquationVariant v) {
    return v != EquationVariant::oscillator_chirp && v != EquationVariant::oscillator_general;
}

// Kernel exp(i s (alpha x^2 + beta x y + gamma y^2)) / sqrt(2 pi i mu), s = 1 in the
// dimensionless equations and m/(2 hbar) for the oscillators.
struct QuadraticPhase {
    double t = 0.0;
    double mu = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

inline constexpr double caustic_threshold = 1e-12;

namespace detail {

// Walk s from s0 to s1 and throw at the first sign change of mu, or if |mu(s1)| is
// below the scale-aware threshold.
template <class Mu>
void scan_caustic(Mu&& mu_of, double s0, double s1, const char* what, double step = 0.02) {
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(s1 - s0) / step)));
    double prev_s = s0, prev = mu_of(s0), local = std::abs(prev);
    for (int i = 1; i <= n; ++i) {
        const double s = (i == n) ? s1 : s0 + (s1 - s0) * i / n;
        const double v = mu_of(s);
        local = std::max(local, std::abs(v));
        if ((v > 0.0) != (prev > 0.0) && v != 0.0 && prev != 0.0) {
            double lo = prev_s, hi = s, flo = prev;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = mu_of(mid);
                if ((fm > 0.0) == (flo > 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            throw CausticError(std::min(lo, hi), std::max(lo, hi), what);
        }
        if (std::abs(v) < caustic_threshold * std::max(1.0, local))
            throw CausticError(std::min(prev_s, s), std::max(prev_s, s), what);
        prev_s = s;
        prev = v;
    }
}

inline double green_mu(EquationVariant v, double s) {
    switch (v) {
        case EquationVariant::increasing:
        case EquationVariant::gauge:
            return 0.5 * airy_pair(s).a;
        case EquationVariant::oscillatory:
            return -0.5 * airy_pair(-s).a;
        case EquationVariant::momentum_increasing:
            return -2.0 * airy_pair(s).db;
        case EquationVariant::momentum_oscillatory:
            return 2.0 * airy_pair(-s).db;
        default:
            throw ParameterError("green_coeffs: variant has no Airy Green function");
    }
}

}  // namespace detail

// Green-function branch of the coefficient system, t > 0 and before the first caustic.
inline QuadraticPhase green_coeffs(EquationVariant v, double t) {
    if (!is_airy_variant(v))
        throw ParameterError(std::string("green_coeffs: use the oscillator routines for ") + to_string(v));
    if (std::isnan(t)) throw DomainError("green_coeffs: NaN time");
    if (!(t > 0.0)) throw DomainError("green_coeffs: t must be positive");
    detail::scan_caustic([v](double s) { return detail::green_mu(v, s); }, std::min(1e-3, 0.5 * t), t,
                         "green_coeffs");
    QuadraticPhase q;
    q.t = t;
    switch (v) {
        case EquationVariant::increasing:
        case EquationVariant::gauge: {
            const auto s = airy_pair(t);
            q.mu = 0.5 * s.a;
            q.alpha = s.da / s.a;
            q.beta = -2.0 / s.a;
            q.gamma = s.b / s.a;
            if (v == EquationVariant::gauge) q.alpha -= 1.0 / t;
            break;
        }
        case EquationVariant::oscillatory: {
            const auto s = airy_pair(-t);
            q.mu = -0.5 * s.a;
            q.alpha = -s.da / s.a;
            q.beta = 2.0 / s.a;
            q.gamma = -s.b / s.a;
            break;
        }
        case EquationVariant::momentum_increasing: {
            const auto s = airy_pair(t);
            q.mu = -2.0 * s.db;
            q.alpha = -s.b / (4.0 * s.db);
            q.beta = 1.0 / (2.0 * s.db);
            q.gamma = -s.da / (4.0 * s.db);
            break;
        }
        case EquationVariant::momentum_oscillatory: {
            const auto s = airy_pair(-t);
            q.mu = 2.0 * s.db;
            q.alpha = s.b / (4.0 * s.db);
            q.beta = -1.0 / (2.0 * s.db);
            q.gamma = s.da / (4.0 * s.db);
            break;
        }
        default:
            break;
    }
    return q;
}

// General particular solution with mu = c1 u1 + c2 u2 built from the Airy pair.
inline QuadraticPhase general_coeffs(EquationVariant v, double c1, double c2, double beta0, double gamma0,
                                     double t) {
    if (!is_airy_variant(v))
        throw ParameterError(std::string("general_coeffs: use the oscillator routines for ") + to_string(v));
    if (c1 == 0.0 && c2 == 0.0) throw ParameterError("general_coeffs: (c1, c2) = (0, 0)");
    const bool momentum = v == EquationVariant::momentum_increasing || v == EquationVariant::momentum_oscillatory;
    if (momentum && c1 == 0.0) throw ParameterError("general_coeffs: c1 = 0 makes mu(0) vanish");
    if (!momentum && c2 == 0.0) throw ParameterError("general_coeffs: c2 = 0 makes mu(0) vanish");
    if (v == EquationVariant::gauge && !(t > 0.0))
        throw SingularError("general_coeffs: the gauge equation is singular at t = 0");

    auto mu_of = [&](double s) {
        switch (v) {
            case EquationVariant::increasing:
            case EquationVariant::gauge: {
                const auto p = airy_pair(s);
                return c1 * p.a + c2 * p.b;
            }
            case EquationVariant::oscillatory: {
                const auto p = airy_pair(-s);
                return c1 * p.a + c2 * p.b;
            }
            case EquationVariant::momentum_increasing: {
                const auto p = airy_pair(s);
                return c1 * p.da + c2 * p.db;
            }
            default: {
                const auto p = airy_pair(-s);
                return c1 * p.da + c2 * p.db;
            }
        }
    };
    if (t != 0.0) detail::scan_caustic(mu_of, 0.0, t, "general_coeffs");

    QuadraticPhase q;
    q.t = t;
    switch (v) {
        case EquationVariant::increasing:
        case EquationVariant::gauge: {
            const auto s = airy_pair(t);
            q.mu = c1 * s.a + c2 * s.b;
            q.alpha = (c1 * s.da + c2 * s.db) / q.mu;
            q.beta = c2 * beta0 / q.mu;
            q.gamma = gamma0 - c2 * beta0 * beta0 * s.a / (4.0 * q.mu);
            if (v == EquationVariant::gauge) q.alpha -= 1.0 / t;
            break;
        }
        case EquationVariant::oscillatory: {
            const auto s = airy_pair(-t);
            q.mu = c1 * s.a + c2 * s.b;
            q.alpha = -(c1 * s.da + c2 * s.db) / q.mu;
            q.beta = c2 * beta0 / q.mu;
            q.gamma = gamma0 + c2 * beta0 * beta0 * s.a / (4.0 * q.mu);
            break;
        }
        case EquationVariant::momentum_increasing: {
            const auto s = airy_pair(t);
            q.mu = c1 * s.da + c2 * s.db;
            q.alpha = -(c1 * s.a + c2 * s.b) / (4.0 * q.mu);
            q.beta = c1 * beta0 / q.mu;
            q.gamma = gamma0 + c1 * beta0 * beta0 * s.db / q.mu;
            break;
        }
        default: {
            const auto s = airy_pair(-t);
            q.mu = c1 * s.da + c2 * s.db;
            q.alpha = (c1 * s.a + c2 * s.b) / (4.0 * q.mu);
            q.beta = c1 * beta0 / q.mu;
            q.gamma = gamma0 - c1 * beta0 * beta0 * s.db / q.mu;
            break;
        }
    }
    return q;
}

// Evolved general coefficients from initial data (at t = 0) and the Green coefficients.
inline QuadraticPhase compose_forward(const QuadraticPhase& init, const QuadraticPhase& green) {
    const double d = init.alpha + green.gamma;
    if (std::abs(d) < 1e-12) throw DegenerateError("compose_forward: alpha(0) + gamma0(t) vanishes");
    QuadraticPhase q;
    q.t = green.t;
    q.mu = 2.0 * init.mu * green.mu * d;
    q.alpha = green.alpha - green.beta * green.beta / (4.0 * d);
    q.beta = -init.beta * green.beta / (2.0 * d);
    q.gamma = init.gamma - init.beta * init.beta / (4.0 * d);
    return q;
}

// Green coefficients recovered from a regular solution at t and at the initial time.
inline QuadraticPhase compose_inverse(const QuadraticPhase& general_t, const QuadraticPhase& general_0) {
    const double d = general_0.gamma - general_t.gamma;
    if (std::abs(d) < 1e-12) throw DegenerateError("compose_inverse: gamma(0) == gamma(t)");
    if (general_0.mu == 0.0 || general_0.beta == 0.0)
        throw DegenerateError("compose_inverse: mu(0) beta(0)^2 vanishes");
    QuadraticPhase q;
    q.t = general_t.t;
    q.mu = 2.0 * general_t.mu * d / (general_0.mu * general_0.beta * general_0.beta);
    q.alpha = general_t.alpha + general_t.beta * general_t.beta / (4.0 * d);
    q.beta = -general_0.beta * general_t.beta / (2.0 * d);
    q.gamma = -general_0.alpha + general_0.beta * general_0.beta / (4.0 * d);
    return q;
}

// mu(tau, delta) = (a(-delta) b(-tau) - b(-delta) a(-tau)) / 2 and its tau derivative
inline std::pair<double, double> oscillator_mu(double tau, double delta) {
    const auto st = airy_pair(-tau), sd = airy_pair(-delta);
    return {0.5 * (sd.a * st.b - sd.b * st.a), 0.5 * (sd.b * st.da - sd.a * st.db)};
}

// Chirp coefficients in the dimensionless time tau; kernel phase factor m omega/(2 hbar).
inline QuadraticPhase oscillator_coeffs(double tau, double delta) {
    if (std::isnan(tau) || std::isnan(delta)) throw DomainError("oscillator_coeffs: NaN argument");
    if (tau == delta) throw CausticError(delta, delta, "oscillator_coeffs: tau = delta is the initial instant");
    const double first = delta + (tau > delta ? 1.0 : -1.0) * std::min(1e-4, 0.5 * std::abs(tau - delta));
    detail::scan_caustic([delta](double s) { return oscillator_mu(s, delta).first; }, first, tau,
                         "oscillator_coeffs");
    const auto st = airy_pair(-tau), sd = airy_pair(-delta);
    const double d = st.a * sd.b - sd.a * st.b;
    QuadraticPhase q;
    q.t = tau;
    q.mu = 0.5 * (sd.a * st.b - sd.b * st.a);
    q.alpha = -(st.da * sd.b - sd.a * st.db) / d;
    q.beta = 2.0 / d;
    q.gamma = -(sd.da * st.b - st.a * sd.db) / d;
    return q;
}

// Chirp coefficients at physical time t mapped to the general-oscillator units
// (kernel phase factor m/(2 hbar), mu'(0) = hbar/m).
inline QuadraticPhase chirp_to_physical(const QuadraticPhase& c, const OscillatorConfig& cfg, double t) {
    const double w = cfg.omega();
    return {t, 2.0 * cfg.hbar * c.mu / (cfg.m * w), w * c.alpha, w * c.beta, w * c.gamma};
}

inline QuadraticPhase oscillator_phase(const OscillatorConfig& cfg, double t) {
    cfg.validate();
    if (t == 0.0) throw CausticError(0.0, 0.0, "oscillator: t = 0 is the initial instant");
    if (!(t > 0.0) || t > cfg.T * (1.0 + 1e-12))
        throw DomainError("oscillator: t outside (0, T]");
    const double w = cfg.omega(), d = cfg.delta();
    try {
        return chirp_to_physical(oscillator_coeffs(cfg.tau(t), d), cfg, t);
    } catch (const CausticError& e) {
        // bracket back in physical time, t = (tau - delta) / omega
        const double a = (e.lo() - d) / w, b = (e.hi() - d) / w;
        throw CausticError(std::min(a, b), std::max(a, b), "oscillator");
    }
}

// Free-particle limit of the oscillator coefficients as t -> 0+.
inline QuadraticPhase free_particle_phase(double t, double m, double hbar) {
    if (!(t > 0.0)) throw DomainError("free_particle_phase: t must be positive");
    return {t, hbar * t / m, 1.0 / t, -2.0 / t, 1.0 / t};
}

enum class GammaMethod { quadrature, companion, automatic };

inline QuadraticPhase general_oscillator_coeffs(const OscillatorSolution& sol, double t,
                                                GammaMethod method = GammaMethod::quadrature) {
    if (!(t > 0.0)) throw DomainError("general_oscillator_coeffs: t must be positive");
    if (t > sol.mu.t_end() + 1e-12) throw DomainError("general_oscillator_coeffs: t beyond the sampled span");
    double lo = 0.0, hi = 0.0;
    if (detail::find_sign_change(sol.mu.t(), sol.mu.mu(), t, [&](double s) { return sol.mu(s).first; }, lo, hi))
        throw CausticError(lo, hi, "general_oscillator_coeffs");
    const auto [mu, dmu] = sol.mu(t);
    if (std::abs(mu) < caustic_threshold * std::max(1.0, sol.hbar / sol.m * t))
        throw CausticError(t, t, "general_oscillator_coeffs");
    QuadraticPhase q;
    q.t = t;
    q.mu = mu;
    q.alpha = dmu / mu;
    q.beta = -2.0 * sol.hbar / (sol.m * mu);
    switch (method) {
        case GammaMethod::quadrature:
            q.gamma = gamma_quadrature(sol, t);
            break;
        case GammaMethod::companion:
            q.gamma = gamma_companion(sol, t);
            break;
        case GammaMethod::automatic:
            try {
                q.gamma = gamma_quadrature(sol, t);
            } catch (const SingularError&) {
                q.gamma = gamma_companion(sol, t);
            }
            break;
    }
    return q;
}

// alpha of the gauge-transformed system, mu'/mu - 1/t with mu = c1 a + c2 b
inline double gauge_alpha(double t, double c1, double c2) {
    if (t == 0.0) throw SingularError("gauge_alpha: singular coefficient at the origin");
    if (!(t > 0.0)) throw DomainError("gauge_alpha: t must be positive");
    const auto s = airy_pair(t);
    const double mu = c1 * s.a + c2 * s.b;
    if (std::abs(mu) < caustic_threshold) throw CausticError(t, t, "gauge_alpha");
    return (c1 * s.da + c2 * s.db) / mu - 1.0 / t;
}

struct RiccatiResidual {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

// Residuals of the governing coefficient system given values q and derivatives dq at q.t.
// For the chirp variant q.t is tau; for the general oscillator omega_sq is omega^2(t).
inline RiccatiResidual riccati_residual(EquationVariant v, const QuadraticPhase& q, const QuadraticPhase& dq,
                                        double omega_sq = 0.0) {
    const double t = q.t, a = q.alpha, b = q.beta;
    switch (v) {
        case EquationVariant::increasing:
            return {dq.alpha - t + a * a, dq.beta + a * b, dq.gamma + b * b / 4};
        case EquationVariant::oscillatory:
        case EquationVariant::oscillator_chirp:
            return {dq.alpha + t + a * a, dq.beta + a * b, dq.gamma + b * b / 4};
        case EquationVariant::momentum_increasing:
            return {dq.alpha + 0.25 - 4 * t * a * a, dq.beta - 4 * t * a * b, dq.gamma - t * b * b};
        case EquationVariant::momentum_oscillatory:
            return {dq.alpha + 0.25 + 4 * t * a * a, dq.beta + 4 * t * a * b, dq.gamma + t * b * b};
        case EquationVariant::gauge:
            return {dq.alpha - t + 2 * a / t + a * a, dq.beta + (a + 1 / t) * b, dq.gamma + b * b / 4};
        case EquationVariant::oscillator_general:
            return {dq.alpha + omega_sq + a * a, dq.beta + a * b, dq.gamma + b * b / 4};
    }
    return {};
}

}  // namespace qprop
