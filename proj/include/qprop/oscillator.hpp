#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"

namespace qprop {

// omega^2(t) for the classical equation mu'' + omega^2(t) mu = 0. Values may be negative.
class FrequencyProfile {
public:
    enum class Kind { constant, linear_chirp, piecewise, tabulated };

    // omega^2 linear from w2_start at t_start to w2_end at t_end
    struct Segment {
        double t_start;
        double t_end;
        double w2_start;
        double w2_end;
    };

    static FrequencyProfile constant(double omega) {
        FrequencyProfile p;
        p.kind_ = Kind::constant;
        p.w2_ = {omega * omega};
        return p;
    }

    // omega0 for t < 0, omega1 for t > T, omega^2 linear in between
    static FrequencyProfile linear_chirp(double omega0, double omega1, double T) {
        if (!(T > 0.0)) throw ParameterError("linear_chirp: T must be positive");
        FrequencyProfile p;
        p.kind_ = Kind::linear_chirp;
        p.t_ = {0.0, T};
        p.w2_ = {omega0 * omega0, omega1 * omega1};
        return p;
    }

    static FrequencyProfile piecewise(const std::vector<Segment>& segments) {
        if (segments.empty()) throw ParameterError("piecewise profile: no segments");
        FrequencyProfile p;
        p.kind_ = Kind::piecewise;
        for (std::size_t i = 0; i < segments.size(); ++i) {
            const auto& s = segments[i];
            if (!(s.t_end > s.t_start)) throw ParameterError("piecewise profile: empty segment");
            if (i > 0) {
                const auto& prev = segments[i - 1];
                if (std::abs(prev.t_end - s.t_start) > 1e-12)
                    throw ParameterError("piecewise profile: segments are not contiguous");
                if (std::abs(prev.w2_end - s.w2_start) > 1e-12 * std::max(1.0, std::abs(s.w2_start)))
                    throw ParameterError("piecewise profile: omega^2 discontinuous at t = " +
                                         std::to_string(s.t_start));
            }
        }
        p.segments_ = segments;
        return p;
    }

    static FrequencyProfile tabulated(std::vector<double> t, std::vector<double> w2) {
        if (t.size() != w2.size() || t.size() < 2)
            throw ParameterError("tabulated profile: need at least two (t, omega^2) rows");
        for (std::size_t i = 1; i < t.size(); ++i)
            if (!(t[i] > t[i - 1])) throw ParameterError("tabulated profile: t must increase");
        FrequencyProfile p;
        p.kind_ = Kind::tabulated;
        p.t_ = std::move(t);
        p.w2_ = std::move(w2);
        return p;
    }

    Kind kind() const { return kind_; }

    double omega_sq(double t) const {
        switch (kind_) {
            case Kind::constant:
                return w2_[0];
            case Kind::linear_chirp:
                if (t <= 0.0) return w2_[0];
                if (t >= t_[1]) return w2_[1];
                return w2_[0] + (w2_[1] - w2_[0]) * t / t_[1];
            case Kind::piecewise: {
                if (t <= segments_.front().t_start) return segments_.front().w2_start;
                for (const auto& s : segments_)
                    if (t <= s.t_end)
                        return s.w2_start + (s.w2_end - s.w2_start) * (t - s.t_start) / (s.t_end - s.t_start);
                return segments_.back().w2_end;
            }
            case Kind::tabulated: {
                if (t <= t_.front()) return w2_.front();
                if (t >= t_.back()) return w2_.back();
                const auto it = std::upper_bound(t_.begin(), t_.end(), t);
                const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
                return w2_[i] + (w2_[i + 1] - w2_[i]) * (t - t_[i]) / (t_[i + 1] - t_[i]);
            }
        }
        return 0.0;
    }

    // points where omega^2 is not smooth
    std::vector<double> breakpoints() const {
        switch (kind_) {
            case Kind::constant:
                return {};
            case Kind::linear_chirp:
                return t_;
            case Kind::piecewise: {
                std::vector<double> b;
                for (const auto& s : segments_) b.push_back(s.t_start);
                b.push_back(segments_.back().t_end);
                return b;
            }
            case Kind::tabulated:
                return t_;
        }
        return {};
    }

    // max of sqrt(|omega^2|) over [t0, t1]; omega^2 is piecewise linear so the
    // extremes sit at breakpoints or ends
    double max_omega(double t0, double t1) const {
        double m = std::max(std::abs(omega_sq(t0)), std::abs(omega_sq(t1)));
        for (double b : breakpoints())
            if (b > t0 && b < t1) m = std::max(m, std::abs(omega_sq(b)));
        return std::sqrt(m);
    }

    const std::vector<Segment>& segments() const { return segments_; }
    const std::vector<double>& table_t() const { return t_; }
    const std::vector<double>& table_w2() const { return w2_; }

private:
    Kind kind_ = Kind::constant;
    std::vector<double> t_;
    std::vector<double> w2_;
    std::vector<Segment> segments_;
};

// Physical parameters of the linear-chirp oscillator, omega(t)^2 from omega0^2 to omega1^2 on [0, T].
struct OscillatorConfig {
    double m = 1.0;
    double hbar = 1.0;
    double omega0 = 1.0;
    double omega1 = 2.0;
    double T = 1.0;

    void validate() const {
        if (!(m > 0.0)) throw ParameterError("oscillator: m must be positive");
        if (!(hbar > 0.0)) throw ParameterError("oscillator: hbar must be positive");
        if (!(omega0 > 0.0) || !(omega1 > 0.0))
            throw ParameterError("oscillator: frequencies must be positive");
        if (!(T > 0.0)) throw ParameterError("oscillator: T must be positive");
        if (omega0 == omega1) throw DegenerateError("oscillator: omega0 == omega1 leaves omega undefined");
    }

    // real cube root; negative when omega1 < omega0
    double omega() const {
        validate();
        return std::cbrt((omega1 * omega1 - omega0 * omega0) / T);
    }

    double delta() const {
        const double w = omega();
        return omega0 * omega0 / (w * w);
    }

    double tau(double t) const { return omega() * t + delta(); }

    FrequencyProfile profile() const { return FrequencyProfile::linear_chirp(omega0, omega1, T); }
};

}  // namespace qprop
