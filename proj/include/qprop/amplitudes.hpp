#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "coeffs.hpp"
#include "errors.hpp"
#include "evolve.hpp"
#include "oscillator.hpp"
#include "specfun.hpp"

namespace qprop {

// D- = (a w0 - g w1)^2 + (w0 w1 + a g - b^2/4)^2, D+ = (a w0 + g w1)^2 + (w0 w1 - a g + b^2/4)^2.
// D+ - D- = b^2 w0 w1, so R = D-/D+ = 1/(1 + zeta^2) lies in [0, 1).
struct TransitionInvariants {
    double d_minus = 0.0;
    double d_plus = 0.0;
    double ratio = 0.0;  // R = tanh^2(tau/2)
};

inline TransitionInvariants transition_invariants(const QuadraticPhase& q, double omega0, double omega1) {
    const double a = q.alpha, b = q.beta, g = q.gamma;
    const double u = omega0 * omega1 + a * g - 0.25 * b * b;
    const double v = omega0 * omega1 - a * g + 0.25 * b * b;
    TransitionInvariants r;
    r.d_minus = std::pow(a * omega0 - g * omega1, 2) + u * u;
    r.d_plus = std::pow(a * omega0 + g * omega1, 2) + v * v;
    if (!(r.d_plus > 0.0)) throw DegenerateError("transition: D+ vanishes");
    r.ratio = r.d_minus / r.d_plus;
    return r;
}

// zeta with the chirp convention: coefficients in units of omega, omega = chirp_scaling.
// chirp_scaling = 1 gives the general-oscillator form.
inline double zeta(const QuadraticPhase& q, double omega0, double omega1, double chirp_scaling = 1.0) {
    const double w = chirp_scaling, w2 = w * w;
    const double a = q.alpha, b = q.beta, g = q.gamma;
    const double den =
        std::pow(a * omega0 - g * omega1, 2) * w2 + std::pow(omega0 * omega1 + a * g * w2 - 0.25 * b * b * w2, 2);
    if (!(den > 0.0)) throw DegenerateError("zeta: vanishing denominator");
    return w * b * std::sqrt(omega0 * omega1) / std::sqrt(den);
}

inline double sudden_zeta(double omega0, double omega1) {
    if (!(omega0 > 0.0) || !(omega1 > 0.0)) throw ParameterError("sudden_zeta: frequencies must be positive");
    if (omega0 == omega1) throw DegenerateError("sudden_zeta: omega0 == omega1, zeta is infinite");
    return 2.0 * std::sqrt(omega0 * omega1) / std::abs(omega0 - omega1);
}

namespace detail {

// log of the hypergeometric factor 2F1(-k,-n;(1-k-n)/2;(1+i zeta)/2) for k+n even,
// with the modulus kept in a wide exponent range
inline cplx log_parity_2f1(int k, int n, double zeta) {
    const wide_real z = zeta;
    const auto ps = parity_split<wide_real>(k, n, z * z);
    wide_real c = ps.odd ? wide_real(-z * ps.coefficient) : ps.coefficient;
    double arg = ps.odd ? std::numbers::pi / 2 : 0.0;
    if (c == 0) return {-std::numeric_limits<double>::infinity(), 0.0};
    if (c < 0) {
        c = -c;
        arg += std::numbers::pi;
    }
    return {static_cast<double>(boost::multiprecision::log(c)), arg};
}

inline double log_factorial(int n) { return std::lgamma(n + 1.0); }

// R below this is treated as the identity transition b^2/(4(g^2 + w0^2)) = 1
inline constexpr double identity_ratio = 1e-24;

}  // namespace detail

// c_kn(T) for kernel coefficients q in physical units (phase factor m/(2 hbar)).
inline cplx transition_amplitude(int k, int n, const QuadraticPhase& q, double omega0, double omega1,
                                 double m = 1.0, double hbar = 1.0) {
    if (k < 0 || n < 0) throw ParameterError("transition_amplitude: negative index");
    if (!(omega0 > 0.0) || !(omega1 > 0.0)) throw ParameterError("transition_amplitude: frequencies must be positive");
    if ((k + n) % 2 != 0) return 0.0;
    if (q.mu == 0.0) throw CausticError(q.t, q.t, "transition_amplitude: mu = 0");
    const auto inv = transition_invariants(q, omega0, omega1);
    if (inv.ratio <= detail::identity_ratio) {
        // U is a pure rotation; sin(theta) = -2 omega0/beta, cos(theta) = -2 alpha/beta
        if (k != n) return 0.0;
        const double th = std::atan2(-2.0 * omega0 / q.beta, -2.0 * q.alpha / q.beta);
        return std::polar(1.0, -(n + 0.5) * th);
    }
    const double a = q.alpha, b = q.beta, g = q.gamma, w0 = omega0, w1 = omega1;
    const double d = g * g + w0 * w0;
    const double s = w0 * b * b / (4 * d), chirp = a - b * b * g / (4 * d);
    const cplx x1(w1 - s, chirp), x2(s - w1, chirp), x3(w1 + s, -chirp);
    const cplx gw(g, w0);
    const double kn = k + n;
    cplx log_c = std::lgamma(0.5 * (kn + 1)) + 0.25 * std::log(w0 * w1 / (std::numbers::pi * std::numbers::pi)) +
                 0.5 * ((kn + 1) * std::log(2.0) + std::log(hbar / m) - detail::log_factorial(k) -
                        detail::log_factorial(n)) -
                 0.5 * std::log(q.mu * gw) + 0.5 * n * std::log(std::conj(gw) / gw);
    if (k > 0) log_c += 0.5 * k * std::log(x1);
    if (n > 0) log_c += 0.5 * n * std::log(x2);
    log_c -= 0.5 * (kn + 1) * std::log(x3);
    log_c += detail::log_parity_2f1(k, n, zeta(q, w0, w1));
    return std::exp(log_c);
}

inline cplx transition_amplitude(int k, int n, const OscillatorConfig& cfg) {
    return transition_amplitude(k, n, oscillator_phase(cfg, cfg.T), cfg.omega0, cfg.omega1, cfg.m, cfg.hbar);
}

// Same amplitude from the dimensionless chirp coefficients at tau = omega T + delta.
// Agrees with the general form in modulus; the two differ by a phase fixed per column.
inline cplx chirp_transition_amplitude(int k, int n, const QuadraticPhase& c, double omega0, double omega1,
                                       double omega) {
    if (k < 0 || n < 0) throw ParameterError("chirp_transition_amplitude: negative index");
    if ((k + n) % 2 != 0) return 0.0;
    if (c.mu == 0.0) throw CausticError(c.t, c.t, "chirp_transition_amplitude: mu = 0");
    const double a = c.alpha, b = c.beta, g = c.gamma, w = omega, w0 = omega0, w1 = omega1;
    const double d = w0 * w0 + g * g * w * w;
    const double s = w0 * w * b * b / (4 * d), chirp = a - w * w * b * b * g / (4 * d);
    const cplx x1(w1 / w - s, chirp), x2(s - w1 / w, chirp), x3(w1 / w + s, -chirp);
    const cplx wg(w0, -g * w);
    const cplx i(0.0, 1.0);
    const double kn = k + n;
    cplx log_c = i * (n * std::numbers::pi / 2) + std::lgamma(0.5 * (kn + 1)) +
                 0.25 * std::log(w0 * w1 / (std::numbers::pi * std::numbers::pi)) +
                 0.5 * (kn * std::log(2.0) - detail::log_factorial(k) - detail::log_factorial(n)) -
                 0.5 * std::log(i * c.mu * wg) + 0.5 * n * std::log(std::conj(wg) / wg);
    if (k > 0) log_c += 0.5 * k * std::log(x1);
    if (n > 0) log_c += 0.5 * n * std::log(x2);
    log_c -= 0.5 * (kn + 1) * std::log(x3);
    log_c += detail::log_parity_2f1(k, n, zeta(c, w0, w1, w));
    return std::exp(log_c);
}

// Instantaneous change omega0 -> omega1.
inline cplx sudden_amplitude(int k, int n, double omega0, double omega1) {
    if (k < 0 || n < 0) throw ParameterError("sudden_amplitude: negative index");
    const double z = sudden_zeta(omega0, omega1);
    if ((k + n) % 2 != 0) return 0.0;
    const double kn = k + n;
    const cplx i(0.0, 1.0);
    cplx log_c = i * (n * std::numbers::pi / 2) + std::lgamma(0.5 * (kn + 1)) +
                 0.25 * std::log(omega0 * omega1 / (std::numbers::pi * std::numbers::pi)) +
                 0.5 * ((kn + 1) * std::log(2.0) - detail::log_factorial(k) - detail::log_factorial(n) -
                        std::log(omega0 + omega1));
    if (kn > 0) log_c += 0.5 * kn * std::log(cplx((omega1 - omega0) / (omega1 + omega0)));
    log_c += detail::log_parity_2f1(k, n, z);
    return std::exp(log_c);
}

// |c_kn|^2 as a function of R alone, through the nonnegative Clausen form.
inline double probability_from_ratio(int k, int n, double ratio) {
    if (k < 0 || n < 0) throw ParameterError("transition_probability: negative index");
    if (!(ratio >= 0.0) || !(ratio < 1.0)) throw DomainError("transition_probability: R outside [0, 1)");
    if ((k + n) % 2 != 0) return 0.0;
    if (ratio <= detail::identity_ratio) return k == n ? 1.0 : 0.0;
    const double kn = k + n;
    const double log_p = 0.5 * std::log1p(-ratio) + kn * std::log(2.0) - detail::log_factorial(k) -
                         detail::log_factorial(n) - std::log(std::numbers::pi) + 2.0 * std::lgamma(0.5 * (kn + 1)) +
                         0.5 * kn * std::log(ratio);
    // 1 + zeta^2 = 1/R
    using detail::wide_real;
    const wide_real z = wide_real(1) / wide_real(ratio);
    const wide_real f2 = clausen_modulus_sq<wide_real>(k, n, z);
    return static_cast<double>(f2 * boost::multiprecision::exp(wide_real(log_p)));
}

inline double transition_probability(int k, int n, const QuadraticPhase& q, double omega0, double omega1) {
    return probability_from_ratio(k, n, transition_invariants(q, omega0, omega1).ratio);
}

inline double transition_probability(int k, int n, const OscillatorConfig& cfg) {
    return transition_probability(k, n, oscillator_phase(cfg, cfg.T), cfg.omega0, cfg.omega1);
}

inline double sudden_ratio(double omega0, double omega1) {
    return std::pow((omega1 - omega0) / (omega1 + omega0), 2);
}

// Negative-binomial laws for the first two columns.
// |c_{2k,0}|^2 = sqrt(1-R) (1/2)_k/k! R^k and |c_{2k+1,1}|^2 = (1-R)^{3/2} (3/2)_k/k! R^k.
inline double ground_column_probability(int k, const QuadraticPhase& q, double omega0, double omega1) {
    const auto inv = transition_invariants(q, omega0, omega1);
    const double lead = std::abs(q.beta) * std::sqrt(omega0 * omega1) / std::sqrt(inv.d_plus);
    return lead * std::exp(std::lgamma(k + 0.5) - std::lgamma(0.5) - detail::log_factorial(k)) *
           std::pow(inv.ratio, k);
}

inline double first_column_probability(int k, const QuadraticPhase& q, double omega0, double omega1) {
    const auto inv = transition_invariants(q, omega0, omega1);
    const double lead = std::pow(q.beta * q.beta * omega0 * omega1 / inv.d_plus, 1.5);
    return lead * std::exp(std::lgamma(k + 1.5) - std::lgamma(1.5) - detail::log_factorial(k)) *
           std::pow(inv.ratio, k);
}

struct TableOptions {
    int k_min = 64;         // default truncation
    int columns_checked = 4; // columns whose omitted tail must stay below tol
    double tol = 1e-10;
    int k_cap = 4000;
};

struct TransitionTable {
    int K_max = 0;
    std::vector<cplx> entries;  // (K_max + 1)^2, row k, column n
    OscillatorConfig params;
    QuadraticPhase phase;
    double zeta = 0.0;
    double ratio = 0.0;
    double tail_bound = 0.0;  // estimated omitted mass, worst checked column
    std::vector<double> unitarity_defect;

    cplx at(int k, int n) const { return entries[static_cast<std::size_t>(k) * (K_max + 1) + n]; }
};

// Smallest K >= k_min such that the geometric estimate of the omitted probability
// of every checked column is below tol. Returns {K, estimated tail}.
inline std::pair<int, double> truncation_order(double ratio, const TableOptions& opt) {
    if (ratio <= detail::identity_ratio) return {opt.k_min, 0.0};
    double worst = 0.0;
    int K = opt.k_min;
    for (;; K += 2) {
        if (K > opt.k_cap) throw TruncationError("transition table: tail does not fall below tol by k_cap");
        worst = 0.0;
        bool ok = true;
        for (int n = 0; n <= opt.columns_checked && ok; ++n) {
            const int last = (K - n) % 2 == 0 ? K : K - 1;
            if (last < n + 2) {
                ok = false;
                break;
            }
            const double w = probability_from_ratio(last, n, ratio);
            const double w_prev = probability_from_ratio(last - 2, n, ratio);
            const double rho = std::max(ratio, w_prev > 0.0 ? w / w_prev : 0.0);
            if (!(rho < 1.0) || w > w_prev) {
                ok = false;
                break;
            }
            const double tail = w * rho / (1.0 - rho);
            worst = std::max(worst, tail);
            if (tail >= opt.tol) ok = false;
        }
        if (ok) return {K, worst};
    }
}

template <class Amplitude>
TransitionTable fill_table(Amplitude&& amp, double ratio, const TableOptions& opt) {
    TransitionTable t;
    const auto [K, tail] = truncation_order(ratio, opt);
    t.K_max = K;
    t.tail_bound = tail;
    t.ratio = ratio;
    const std::size_t size = static_cast<std::size_t>(K) + 1;
    t.entries.assign(size * size, 0.0);
    t.unitarity_defect.assign(size, 0.0);
    for (int n = 0; n <= K; ++n) {
        double col = 0.0;
        for (int k = n % 2; k <= K; k += 2) {
            const cplx c = amp(k, n);
            t.entries[static_cast<std::size_t>(k) * size + n] = c;
            col += std::norm(c);
        }
        t.unitarity_defect[n] = std::abs(col - 1.0);
    }
    return t;
}

inline TransitionTable transition_table(const OscillatorConfig& cfg, const TableOptions& opt = {}) {
    const auto q = oscillator_phase(cfg, cfg.T);
    auto t = fill_table([&](int k, int n) { return transition_amplitude(k, n, q, cfg.omega0, cfg.omega1, cfg.m, cfg.hbar); },
                        transition_invariants(q, cfg.omega0, cfg.omega1).ratio, opt);
    t.params = cfg;
    t.phase = q;
    t.zeta = zeta(q, cfg.omega0, cfg.omega1);
    return t;
}

// Table for arbitrary terminal coefficients (general omega(t)); params carry m, hbar, omega0, omega1.
inline TransitionTable transition_table(const QuadraticPhase& q, const OscillatorConfig& params,
                                        const TableOptions& opt = {}) {
    auto t = fill_table(
        [&](int k, int n) { return transition_amplitude(k, n, q, params.omega0, params.omega1, params.m, params.hbar); },
        transition_invariants(q, params.omega0, params.omega1).ratio, opt);
    t.params = params;
    t.phase = q;
    const auto inv = transition_invariants(q, params.omega0, params.omega1);
    t.zeta = inv.ratio > detail::identity_ratio ? zeta(q, params.omega0, params.omega1)
                                                : std::numeric_limits<double>::infinity();
    return t;
}

inline TransitionTable sudden_table(double omega0, double omega1, const TableOptions& opt = {}) {
    auto t = fill_table([&](int k, int n) { return sudden_amplitude(k, n, omega0, omega1); },
                        sudden_ratio(omega0, omega1), opt);
    t.params = OscillatorConfig{1.0, 1.0, omega0, omega1, 0.0};
    t.zeta = sudden_zeta(omega0, omega1);
    return t;
}

struct ExpandedState {
    std::vector<cplx> coefficients;
    double input_norm_defect = 0.0;   // |sum |c0|^2 - 1|
    double output_norm_defect = 0.0;  // |sum |c1|^2 - 1|
    bool normalized_input = true;      // input_norm_defect <= 1e-8
};

// c1_k = sum_n c_kn c0_n
inline ExpandedState expand_state(const std::vector<cplx>& c0, const TransitionTable& table) {
    if (c0.size() > static_cast<std::size_t>(table.K_max) + 1)
        throw RangeError("expand_state: input longer than the table");
    ExpandedState out;
    out.coefficients.assign(static_cast<std::size_t>(table.K_max) + 1, 0.0);
    double in = 0.0, res = 0.0;
    for (const auto& c : c0) in += std::norm(c);
    for (int k = 0; k <= table.K_max; ++k) {
        cplx acc = 0.0;
        for (std::size_t n = 0; n < c0.size(); ++n) acc += table.at(k, static_cast<int>(n)) * c0[n];
        out.coefficients[k] = acc;
        res += std::norm(acc);
    }
    out.input_norm_defect = std::abs(in - 1.0);
    out.output_norm_defect = std::abs(res - 1.0);
    out.normalized_input = out.input_norm_defect <= 1e-8;
    return out;
}

// SU(1,1) parameters of the transition. tau > 0; sign carries sign(beta), so that
// sign / sinh(tau/2) = zeta.
struct BargmannAngles {
    double theta = 0.0;
    double tau = 0.0;
    double phi = 0.0;
    int sign = 1;
};

struct BargmannIndex {
    double j = -0.75;
    double lambda = 0.25;
    double lambda_prime = 0.25;
    int r = 0;  // lambda - j - 1
    int s = 0;  // lambda' - j - 1
};

namespace detail {
inline double reduce_angle(double a) {
    // atan2 already lies in [-pi, pi]; move -pi to pi
    return a <= -std::numbers::pi ? a + 2 * std::numbers::pi : a;
}
}  // namespace detail

inline BargmannAngles bargmann_angles(const QuadraticPhase& q, double omega0, double omega1) {
    const double a = q.alpha, b = q.beta, g = q.gamma, w0 = omega0, w1 = omega1;
    const double c = a * g - 0.25 * b * b;
    const double u = w0 * w1 + c, v = w0 * w1 - c;
    const double p = a * w0 + g * w1, m = a * w0 - g * w1;
    const double n3 = 2 * a * w0 * w0 * w1 + 2 * g * w1 * c, d3 = p * m - u * v;
    const double n4 = -2 * g * w0 * w1 * w1 - 2 * a * w0 * c, d4 = p * m + u * v;
    const double scale = std::max({std::abs(n3), std::abs(d3), std::abs(n4), std::abs(d4), 1e-300});
    const double eps = 1e-14 * (p * p + m * m + u * u + v * v);
    if ((std::abs(n3) <= eps && std::abs(d3) <= eps) || (std::abs(n4) <= eps && std::abs(d4) <= eps) || scale == 1e-300)
        throw DegenerateError("bargmann_angles: rotation angle indeterminate");
    const auto inv = transition_invariants(q, omega0, omega1);
    if (!(inv.ratio > 0.0)) throw DegenerateError("bargmann_angles: tau = 0");
    BargmannAngles r;
    r.theta = detail::reduce_angle(std::atan2(n3, d3));
    // n4/d4 is the swapped tan(theta) fraction with both parts negated;
    // negating both keeps theta <-> phi exact under alpha <-> gamma, omega0 <-> omega1
    r.phi = detail::reduce_angle(std::atan2(-n4, -d4));
    r.tau = 2.0 * std::atanh(std::sqrt(inv.ratio));
    r.sign = b < 0.0 ? -1 : 1;
    return r;
}

inline BargmannIndex quantum_numbers(int k, int n) {
    if (k < 0 || n < 0) throw ParameterError("quantum_numbers: negative index");
    if ((k + n) % 2 != 0) throw ParityError("quantum_numbers: k+n odd");
    BargmannIndex idx;
    idx.r = k / 2;
    idx.s = n / 2;
    const double shift = (k % 2 == 0) ? 0.25 : 0.75;
    idx.j = (k % 2 == 0) ? -0.75 : -0.25;
    idx.lambda = idx.r + shift;
    idx.lambda_prime = idx.s + shift;
    return idx;
}

// Bargmann function t^j_{lambda lambda'}(tau), tau > 0.
inline double bargmann_t(const BargmannIndex& idx, double tau) {
    if (!(tau > 0.0)) throw SingularError("bargmann_t: tau must be positive (the tau -> 0 limit is a Kronecker delta)");
    if (idx.r < 0 || idx.s < 0) throw ParameterError("bargmann_t: invalid index");
    const double j = idx.j, lam = idx.lambda, lamp = idx.lambda_prime;
    using detail::wide_real;
    const double sh = std::sinh(0.5 * tau), th = std::tanh(0.5 * tau);
    const double log_pref = -std::lgamma(2 * j + 2) +
                            0.5 * (std::lgamma(lam + j + 1) + std::lgamma(lamp + j + 1) -
                                   detail::log_factorial(idx.r) - detail::log_factorial(idx.s)) +
                            (-2 * j - 2) * std::log(sh) + (lam + lamp) * std::log(th);
    const wide_real z = -wide_real(1) / (wide_real(sh) * wide_real(sh));
    const wide_real f = hyp2f1_terminating<wide_real, wide_real>(idx.r, idx.s, wide_real(2 * j + 2), z);
    const wide_real v = f * boost::multiprecision::exp(wide_real(log_pref));
    return (idx.r % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(v);
}

inline double bargmann_t_limit(const BargmannIndex& idx) {
    return idx.r == idx.s ? 1.0 : 0.0;
}

inline cplx bargmann_T(const BargmannIndex& idx, const BargmannAngles& ang) {
    return std::polar(bargmann_t(idx, ang.tau), -idx.lambda * ang.theta - idx.lambda_prime * ang.phi);
}

// e^{tau/4} int Psi_k(x) Psi_n(e^{tau/2} x) dx with unit-frequency eigenstates.
inline double bargmann_integral(int k, int n, double tau) {
    if ((k + n) % 2 != 0) throw ParityError("bargmann_integral: k+n odd");
    const double sc = std::exp(0.5 * tau);
    auto f = [&](double x) { return eigenstate(k, 1.0, 1.0, 1.0, x) * eigenstate(n, 1.0, 1.0, 1.0, sc * x); };
    const double half = std::sqrt(2.0 * std::max(k, n) + 1.0) * std::max(1.0, 1.0 / sc) + 12.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, half, 20, 1e-14);
    // the integrand is even for k+n even
    return 2.0 * std::exp(0.25 * tau) * v;
}

}  // namespace qprop
