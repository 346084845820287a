#include "kecone/ode_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kecone {

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;

// 5th order minus embedded 4th order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// PI controller constants (Hairer, Nørsett & Wanner, DOPRI5).
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;

struct Vec2 {
    double f;
    double h;
};

Derivative eval_unchecked(double r, double f, double h) {
    const double coth2r = 1.0 / std::tanh(2.0 * r);
    return {h, 12.0 * f * h + 2.0 * coth2r * h - h * h / f};
}

Vec2 as_vec(const Derivative& d) { return {d.df_dr, d.dh_dr}; }

double scaled_error(double err, double y_old, double y_new, const StepControl& control) {
    const double scale =
        std::max(control.abs_tol, control.rel_tol * std::max(std::abs(y_old), std::abs(y_new)));
    return std::abs(err) / scale;
}

double initial_step(const PhaseState& s, const Vec2& k1, double span, const StepControl& control) {
    auto norm = [&](double vf, double vh) {
        const double sf = control.abs_tol + control.rel_tol * std::abs(s.f);
        const double sh = control.abs_tol + control.rel_tol * std::abs(s.h);
        return std::max(std::abs(vf) / sf, std::abs(vh) / sh);
    };
    const double d0 = norm(s.f, s.h);
    const double d1 = norm(k1.f, k1.h);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min({h0, control.h_max, span});

    // Explicit Euler probe for the second derivative.
    const double r1 = s.r - h0;
    const double f1 = s.f - h0 * k1.f;
    const double hh1 = s.h - h0 * k1.h;
    double h1 = h0;
    if (r1 < 0.0 && f1 != 0.0) {
        const Vec2 k2 = as_vec(eval_unchecked(r1, f1, hh1));
        const double d2 = norm(k2.f - k1.f, k2.h - k1.h) / h0;
        const double dmax = std::max(d1, d2);
        h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    }
    return std::clamp(std::min(100.0 * h0, h1), control.h_min, std::min(control.h_max, span));
}

}  // namespace

void StepControl::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw std::invalid_argument("step control: tolerances must be positive");
    }
    if (!(h_min > 0.0) || !(h_min <= h_max)) {
        throw std::invalid_argument("step control: require 0 < h_min <= h_max");
    }
    if (max_steps == 0) {
        throw std::invalid_argument("step control: max_steps must be positive");
    }
}

std::string_view to_string(TerminationStatus status) {
    switch (status) {
        case TerminationStatus::ReachedEnd: return "ReachedEnd";
        case TerminationStatus::FWentNonpositive: return "FWentNonpositive";
        case TerminationStatus::HWentNonnegative: return "HWentNonnegative";
        case TerminationStatus::StepUnderflow: return "StepUnderflow";
        case TerminationStatus::StepBudgetExhausted: return "StepBudgetExhausted";
        case TerminationStatus::NonFinite: return "NonFinite";
    }
    return "Unknown";
}

Derivative rhs(const PhaseState& state) {
    if (!(state.r < 0.0)) {
        throw std::domain_error("rhs: r must be strictly negative");
    }
    if (state.f == 0.0) {
        throw std::domain_error("rhs: f must be nonzero");
    }
    return eval_unchecked(state.r, state.f, state.h);
}

Trajectory integrate(const PhaseState& start, double r_target, const StepControl& control) {
    control.validate();
    if (!(start.r < 0.0)) {
        throw std::invalid_argument("integrate: start.r must be strictly negative");
    }
    if (!(r_target < start.r)) {
        throw std::invalid_argument("integrate: r_target must lie below start.r");
    }

    Trajectory out;
    out.samples.push_back(start);

    PhaseState y = start;
    Vec2 k1 = as_vec(rhs(start));
    double step = initial_step(start, k1, start.r - r_target, control);
    double err_old = 1e-4;
    bool last_rejected = false;
    std::size_t accepted = 0;

    while (true) {
        if (accepted >= control.max_steps) {
            out.status = TerminationStatus::StepBudgetExhausted;
            return out;
        }

        const double remaining = y.r - r_target;
        bool clamped = false;
        if (step >= remaining) {
            step = remaining;
            clamped = true;
        }
        if (step < control.h_min && !clamped) {
            out.status = TerminationStatus::StepUnderflow;
            return out;
        }

        // Integration runs towards decreasing r.
        const double d = -step;
        const double r = y.r;
        auto stage = [&](double cr, double df, double dh) {
            return as_vec(eval_unchecked(r + cr * d, y.f + d * df, y.h + d * dh));
        };
        const Vec2 k2 = stage(c2, a21 * k1.f, a21 * k1.h);
        const Vec2 k3 = stage(c3, a31 * k1.f + a32 * k2.f, a31 * k1.h + a32 * k2.h);
        const Vec2 k4 = stage(c4, a41 * k1.f + a42 * k2.f + a43 * k3.f,
                              a41 * k1.h + a42 * k2.h + a43 * k3.h);
        const Vec2 k5 = stage(c5, a51 * k1.f + a52 * k2.f + a53 * k3.f + a54 * k4.f,
                              a51 * k1.h + a52 * k2.h + a53 * k3.h + a54 * k4.h);
        const Vec2 k6 =
            stage(1.0, a61 * k1.f + a62 * k2.f + a63 * k3.f + a64 * k4.f + a65 * k5.f,
                  a61 * k1.h + a62 * k2.h + a63 * k3.h + a64 * k4.h + a65 * k5.h);

        PhaseState next;
        next.r = clamped ? r_target : r + d;
        next.f = y.f + d * (a71 * k1.f + a73 * k3.f + a74 * k4.f + a75 * k5.f + a76 * k6.f);
        next.h = y.h + d * (a71 * k1.h + a73 * k3.h + a74 * k4.h + a75 * k5.h + a76 * k6.h);
        const Vec2 k7 = as_vec(eval_unchecked(next.r, next.f, next.h));

        const double err_f =
            d * (e1 * k1.f + e3 * k3.f + e4 * k4.f + e5 * k5.f + e6 * k6.f + e7 * k7.f);
        const double err_h =
            d * (e1 * k1.h + e3 * k3.h + e4 * k4.h + e5 * k5.h + e6 * k6.h + e7 * k7.h);
        const double err = std::max(scaled_error(err_f, y.f, next.f, control),
                                    scaled_error(err_h, y.h, next.h, control));

        if (!std::isfinite(err)) {
            ++out.rejected_steps;
            last_rejected = true;
            step *= kFacMin;
            continue;
        }

        if (err > 1.0) {
            ++out.rejected_steps;
            const double fac = std::max(kFacMin, kSafety * std::pow(err, -kExpo));
            step *= fac;
            last_rejected = true;
            continue;
        }

        // Accepted.
        ++accepted;
        out.f_error_estimate += std::abs(err_f);
        const double h_prev = y.h;
        y = next;
        k1 = k7;
        out.samples.push_back(y);

        if (!std::isfinite(y.f) || !std::isfinite(y.h)) {
            out.status = TerminationStatus::NonFinite;
            return out;
        }
        if (y.f <= 0.0) {
            out.status = TerminationStatus::FWentNonpositive;
            return out;
        }
        const bool underflowed_to_zero =
            y.h == 0.0 && std::abs(h_prev) < std::numeric_limits<double>::min();
        if (y.h > 0.0 || (y.h == 0.0 && !underflowed_to_zero)) {
            out.status = TerminationStatus::HWentNonnegative;
            return out;
        }
        if (clamped) {
            out.status = TerminationStatus::ReachedEnd;
            return out;
        }

        double fac = std::pow(std::max(err, 1e-10), -kExpo) * std::pow(err_old, kBeta);
        fac = std::clamp(kSafety * fac, kFacMin, kFacMax);
        if (last_rejected) {
            fac = std::min(fac, 1.0);
        }
        err_old = std::max(err, 1e-4);
        last_rejected = false;
        step = std::min(step * fac, control.h_max);
    }
}

}  // namespace kecone
