#pragma once

// Independent reference computations shared by the unit tests and the acceptance run.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle_ref {

using boost::multiprecision::cpp_rational;

// Exact Gaussian rationals re + i*im.
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
    friend GaussRational operator-(const GaussRational& a, const GaussRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const GaussRational& a, const GaussRational& b) {
        return a.re == b.re && a.im == b.im;
    }
};

// Adaptive Gauss-Kronrod over [a, b] for real integrands.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13, unsigned depth = 25) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, depth, tol);
}

inline std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                              double a, double b, double tol = 1e-13,
                                              unsigned depth = 25) {
    const double re = integrate([&](double x) { return f(x).real(); }, a, b, tol, depth);
    const double im = integrate([&](double x) { return f(x).imag(); }, a, b, tol, depth);
    return {re, im};
}

// Explicit-coefficient physicists' Hermite polynomial,
// H_n(x) = n! sum_m (-1)^m (2x)^(n-2m) / (m! (n-2m)!).
inline double hermite_explicit(int n, double x) {
    long double s = 0;
    for (int m = 0; 2 * m <= n; ++m) {
        long double c = std::tgamma(static_cast<long double>(n + 1)) /
                        (std::tgamma(static_cast<long double>(m + 1)) *
                         std::tgamma(static_cast<long double>(n - 2 * m + 1)));
        s += ((m % 2) ? -c : c) * std::pow(2.0L * x, n - 2 * m);
    }
    return static_cast<double>(s);
}

// Normalized oscillator eigenstate from the explicit Hermite form (m = hbar = 1).
inline double eigenstate_explicit(int n, double omega, double x) {
    const double xi = std::sqrt(omega) * x;
    const double norm = std::pow(omega / M_PI, 0.25) /
                        std::sqrt(std::pow(2.0, n) * std::tgamma(static_cast<double>(n + 1)));
    return norm * std::exp(-0.5 * xi * xi) * hermite_explicit(n, xi);
}

// Integral over the real line of an entire f = exp(i (A z^2 + B z)) g(z) with g slowly varying
// and Im A >= 0. The path is moved to the line through the saddle -B/(2A) along which
// i A z^2 decays like exp(-|A| s^2), and truncated where that factor drops below e^-80.
inline std::complex<double> fresnel_line_integral(const std::function<std::complex<double>(std::complex<double>)>& f,
                                                  std::complex<double> A, std::complex<double> B,
                                                  double tol = 1e-11) {
    const std::complex<double> z0 = -B / (2.0 * A);
    const std::complex<double> dir = std::polar(1.0, 0.5 * (M_PI / 2 - std::arg(A)));
    const double L = std::sqrt(80.0 / std::abs(A));
    return dir * integrate_complex([&](double s) { return f(z0 + dir * s); }, -L, L, tol, 12);
}

// Fourth-order central differences.
template <class F>
auto diff1(F&& f, double x, double h) {
    return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

template <class F>
auto diff2(F&& f, double x, double h) {
    return (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace oracle_ref
