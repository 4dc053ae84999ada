#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <type_traits>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/airy.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "errors.hpp"

namespace qprop {

// Values of the pair a, b with a(0)=b'(0)=0, a'(0)=b(0)=1 (solutions of u'' = t u).
struct AirySample {
    double t = 0.0;
    double a = 0.0;
    double b = 0.0;
    double da = 0.0;
    double db = 0.0;
};

struct StandardAiry {
    double ai = 0.0;
    double bi = 0.0;
    double dai = 0.0;
    double dbi = 0.0;
};

template <class Real>
struct AiryValues {
    Real a, b, da, db;
};

inline constexpr double airy_t_max = 30.0;
inline constexpr double airy_series_limit = 8.0;

namespace detail {

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

template <class T>
using std_abs_t = decltype(std::abs(std::declval<T>()));

// Neumaier summation for floating types, plain summation otherwise (exact types).
template <class T, class Enable = void>
class Accumulator {
public:
    void add(const T& x) { sum_ = sum_ + x; }
    T value() const { return sum_; }

private:
    T sum_ = T(0);
};

template <class T>
class Accumulator<T, std::enable_if_t<std::is_floating_point_v<T>>> {
public:
    void add(T x) {
        T s = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - s) + x;
        else
            comp_ += (x - s) + sum_;
        sum_ = s;
    }
    T value() const { return sum_ + comp_; }

private:
    T sum_ = 0;
    T comp_ = 0;
};

template <class T>
class Accumulator<std::complex<T>, std::enable_if_t<std::is_floating_point_v<T>>> {
public:
    void add(const std::complex<T>& x) {
        re_.add(x.real());
        im_.add(x.imag());
    }
    std::complex<T> value() const { return {re_.value(), im_.value()}; }

private:
    Accumulator<T> re_;
    Accumulator<T> im_;
};

inline const std::array<std::array<long double, 2>, 2>& airy_to_pair_matrix() {
    static const auto m = [] {
        const long double g13 = std::tgamma(1.0L / 3.0L);
        const long double g23 = std::tgamma(2.0L / 3.0L);
        const long double c3 = 3.0L;
        return std::array<std::array<long double, 2>, 2>{
            {{-0.5L * std::pow(c3, 1.0L / 3.0L) * g13, 0.5L * std::pow(c3, -1.0L / 6.0L) * g13},
             {0.5L * std::pow(c3, 2.0L / 3.0L) * g23, 0.5L * std::pow(c3, 1.0L / 6.0L) * g23}}};
    }();
    return m;
}

// exact inverse; determinant of the matrix above is -pi
inline const std::array<std::array<long double, 2>, 2>& pair_to_airy_matrix() {
    static const auto m = [] {
        const long double g13 = std::tgamma(1.0L / 3.0L);
        const long double g23 = std::tgamma(2.0L / 3.0L);
        const long double c3 = 3.0L;
        const long double s = 1.0L / (2.0L * boost::math::constants::pi<long double>());
        return std::array<std::array<long double, 2>, 2>{
            {{-s * std::pow(c3, 1.0L / 6.0L) * g23, s * std::pow(c3, -1.0L / 6.0L) * g13},
             {s * std::pow(c3, 2.0L / 3.0L) * g23, s * std::pow(c3, 1.0L / 3.0L) * g13}}};
    }();
    return m;
}

}  // namespace detail

// Power series for a, b, a', b'. Terms are summed until all four fall below eps
// relative to their partial sums and the term ratio is below 1/2.
template <class Real>
AiryValues<Real> airy_series(const Real& t, const Real& eps, int max_terms = 5000) {
    using std::abs;
    const Real t3 = t * t * t;
    Real ta = t, tda = Real(1), tb = Real(1), tdb = t * t / 2;
    detail::Accumulator<Real> sa, sda, sb, sdb;
    for (int k = 0; k < max_terms; ++k) {
        sa.add(ta);
        sda.add(tda);
        sb.add(tb);
        sdb.add(tdb);
        const Real k3 = Real(3 * k);
        const Real ratio = abs(t3) / ((k3 + 3) * (k3 + 4));
        if (ratio < Real(0.5) && abs(ta) <= eps * abs(sa.value()) &&
            abs(tda) <= eps * abs(sda.value()) && abs(tb) <= eps * abs(sb.value()) &&
            abs(tdb) <= eps * abs(sdb.value()))
            return {sa.value(), sb.value(), sda.value(), sdb.value()};
        ta = ta * t3 / ((k3 + 3) * (k3 + 4));
        tda = tda * t3 / ((k3 + 1) * (k3 + 3));
        tb = tb * t3 / ((k3 + 2) * (k3 + 3));
        tdb = tdb * t3 / ((k3 + 3) * (k3 + 5));
    }
    throw RangeError("airy_series: no convergence");
}

inline StandardAiry to_standard_airy(const AirySample& s) {
    const auto& m = detail::pair_to_airy_matrix();
    StandardAiry r;
    r.ai = static_cast<double>(m[0][0] * s.a + m[0][1] * s.b);
    r.bi = static_cast<double>(m[1][0] * s.a + m[1][1] * s.b);
    r.dai = static_cast<double>(m[0][0] * s.da + m[0][1] * s.db);
    r.dbi = static_cast<double>(m[1][0] * s.da + m[1][1] * s.db);
    return r;
}

inline AirySample from_standard_airy(const StandardAiry& s, double t) {
    const auto& m = detail::airy_to_pair_matrix();
    AirySample r;
    r.t = t;
    r.a = static_cast<double>(m[0][0] * s.ai + m[0][1] * s.bi);
    r.b = static_cast<double>(m[1][0] * s.ai + m[1][1] * s.bi);
    r.da = static_cast<double>(m[0][0] * s.dai + m[0][1] * s.dbi);
    r.db = static_cast<double>(m[1][0] * s.dai + m[1][1] * s.dbi);
    return r;
}

inline StandardAiry standard_airy(double t) {
    namespace bm = boost::math;
    return {bm::airy_ai(t), bm::airy_bi(t), bm::airy_ai_prime(t), bm::airy_bi_prime(t)};
}

inline AirySample airy_pair(double t, double t_max = airy_t_max) {
    if (std::isnan(t)) throw DomainError("airy_pair: NaN argument");
    if (!(std::abs(t) <= t_max)) throw RangeError("airy_pair: |t| exceeds the evaluation range");
    if (std::abs(t) <= airy_series_limit) {
        const auto v = airy_series<long double>(t, std::numeric_limits<long double>::epsilon());
        return {t, static_cast<double>(v.a), static_cast<double>(v.b), static_cast<double>(v.da),
                static_cast<double>(v.db)};
    }
    return from_standard_airy(standard_airy(t), t);
}

template <class T>
T hermite(int n, const T& x) {
    if (n < 0) throw ParameterError("hermite: negative degree");
    if (n > 200) throw RangeError("hermite: degree above 200");
    T h0 = T(1);
    if (n == 0) return h0;
    T h1 = T(2) * x;
    for (int k = 1; k < n; ++k) {
        T h2 = T(2) * x * h1 - T(2 * k) * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

inline double hermite(int n, double x) { return hermite<double>(n, x); }

template <class Num>
Num pochhammer(const Num& a, int j) {
    Num p = Num(1);
    for (int i = 0; i < j; ++i) p = p * (a + Num(i));
    return p;
}

// sum_{j<terms} prod_i (a_i)_j / prod_i (b_i)_j * z^j / j!
template <class Coef, class Arg, std::size_t P, std::size_t Q>
Arg terminating_pfq(const std::array<Coef, P>& a, const std::array<Coef, Q>& b, const Arg& z,
                    int terms) {
    detail::Accumulator<Arg> acc;
    Arg term = Arg(1);
    for (int j = 0; j < terms; ++j) {
        acc.add(term);
        if (j + 1 == terms) break;
        Coef num = Coef(1), den = Coef(j + 1);
        for (const auto& ai : a) num = num * (ai + Coef(j));
        for (const auto& bi : b) {
            const Coef d = bi + Coef(j);
            if (d == Coef(0)) throw ParameterError("hypergeometric: zero Pochhammer denominator");
            den = den * d;
        }
        term = term * z * static_cast<Arg>(num / den);
    }
    return acc.value();
}

template <class Coef, class Arg>
Arg hyp2f1_terminating(int k, int n, const Coef& c, const Arg& z) {
    if (k < 0 || n < 0) throw ParameterError("hyp2f1_term: negative index");
    return terminating_pfq<Coef, Arg, 2, 1>({Coef(-k), Coef(-n)}, {c}, z, std::min(k, n) + 1);
}

struct HypTermSpec {
    int k = 0;
    int n = 0;
    double c = 1.0;
    std::complex<double> z{0.0, 0.0};
};

inline std::complex<double> hyp2f1_term(const HypTermSpec& s) {
    const std::complex<long double> z(s.z.real(), s.z.imag());
    const auto v = hyp2f1_terminating<long double, std::complex<long double>>(s.k, s.n, s.c, z);
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

// F = coefficient (even k, n) or F = -i*zeta*coefficient (odd k, n)
template <class Num>
struct ParitySplit {
    Num coefficient;
    bool odd;
};

template <class Num>
ParitySplit<Num> parity_split(int k, int n, const Num& zeta_sq) {
    if (k < 0 || n < 0) throw ParameterError("parity_split: negative index");
    if ((k + n) % 2 != 0) throw ParityError("parity_split: k+n odd");
    const bool odd = (k % 2) != 0;
    const int r = k / 2, s = n / 2;
    const Num p = odd ? Num(3) / Num(2) : Num(1) / Num(2);
    // (p)_r (p)_s / (p)_{r+s} = prod_{i<s} (p+i)/(p+r+i), free of overflow for large r
    Num pref = Num(1);
    for (int i = 0; i < std::min(r, s); ++i) pref = pref * (p + Num(i)) / (p + Num(std::max(r, s) + i));
    const Num f = hyp2f1_terminating<Num, Num>(r, s, p, Num(0) - zeta_sq);
    return {pref * f, odd};
}

namespace detail {
// the alternating sums below lose digits to cancellation for large k, n and |zeta| > 1
using wide_real = boost::multiprecision::cpp_bin_float_quad;
}  // namespace detail

inline std::complex<double> parity_split_2f1(int k, int n, double zeta) {
    const detail::wide_real z = zeta;
    const auto ps = parity_split<detail::wide_real>(k, n, z * z);
    if (!ps.odd) return {static_cast<double>(ps.coefficient), 0.0};
    return {0.0, static_cast<double>(-z * ps.coefficient)};
}

// 3F2(-k,-n,-(k+n)/2; (1-k-n)/2, -k-n; z). With z = 1+zeta^2 this equals F^2 for
// F = 2F1(-k,-n;(1-k-n)/2;(1+i zeta)/2), so |F|^2 = (-1)^k times it.
template <class Num>
Num clausen_3f2(int k, int n, const Num& z) {
    if (k < 0 || n < 0) throw ParameterError("clausen_3f2: negative index");
    if ((k + n) % 2 != 0) throw ParityError("clausen_3f2: k+n odd");
    const Num a3 = Num(-(k + n) / 2);
    const Num b1 = Num(1 - k - n) / Num(2);
    return terminating_pfq<Num, Num, 3, 2>({Num(-k), Num(-n), a3}, {b1, Num(-k - n)}, z,
                                           std::min(k, n) + 1);
}

inline double clausen_3f2(int k, int n, double z) {
    return static_cast<double>(clausen_3f2<detail::wide_real>(k, n, detail::wide_real(z)));
}

template <class Num>
Num clausen_modulus_sq(int k, int n, const Num& z) {
    const Num v = clausen_3f2<Num>(k, n, z);
    return (k % 2 == 0) ? v : Num(0) - v;
}

inline double clausen_modulus_sq(int k, int n, double z) {
    return static_cast<double>(clausen_modulus_sq<detail::wide_real>(k, n, detail::wide_real(z)));
}

// integral over the real line of exp(i(a z^2 + 2 b z))
inline std::complex<double> gauss_fresnel(std::complex<double> a, std::complex<double> b) {
    if (a == std::complex<double>(0.0, 0.0)) throw DomainError("gauss_fresnel: a = 0");
    if (a.imag() < 0.0) throw DomainError("gauss_fresnel: Im a < 0");
    const std::complex<double> i(0.0, 1.0);
    const double pi = boost::math::constants::pi<double>();
    return std::sqrt(pi * i / a) * std::exp(-i * b * b / a);
}

inline double gamma_fn(double x) { return std::tgamma(x); }
inline double log_gamma(double x) { return std::lgamma(x); }

}  // namespace qprop
