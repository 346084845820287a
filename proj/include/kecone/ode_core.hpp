#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace kecone {

/// One point (r, f, h) of the reduced Kähler–Einstein system
///
///   f_r = h
///   h_r = 12 f h + 2 coth(2r) h - h^2 / f
///
/// with f = ab and h = f_r = -c^2. The physical region is r < 0.
struct PhaseState {
    double r = 0.0;
    double f = 0.0;
    double h = 0.0;
};

struct Derivative {
    double df_dr = 0.0;
    double dh_dr = 0.0;
};

/// Adaptive step-size controls. Step magnitudes are measured in |dr|.
struct StepControl {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double h_min = 1e-13;
    double h_max = 0.1;
    std::size_t max_steps = 10'000'000;

    /// Throws std::invalid_argument when an invariant is broken.
    void validate() const;
};

enum class TerminationStatus {
    ReachedEnd,
    FWentNonpositive,
    HWentNonnegative,
    StepUnderflow,
    StepBudgetExhausted,
    NonFinite,
};

std::string_view to_string(TerminationStatus status);

struct Trajectory {
    /// Every accepted state, starting with the initial one; r strictly decreasing.
    std::vector<PhaseState> samples;
    TerminationStatus status = TerminationStatus::ReachedEnd;
    /// Sum of |local error estimate| of the f component over accepted steps.
    double f_error_estimate = 0.0;
    std::size_t rejected_steps = 0;

    [[nodiscard]] bool succeeded() const noexcept { return status == TerminationStatus::ReachedEnd; }
    [[nodiscard]] const PhaseState& back() const { return samples.back(); }
};

/// Right-hand side of the reduced system. Throws std::domain_error for
/// r >= 0 or f == 0.
Derivative rhs(const PhaseState& state);

/// Integrates from `start` towards decreasing r until `r_target` with a
/// Dormand–Prince 5(4) pair and PI step control.
///
/// Failure modes are reported through Trajectory::status. After each
/// accepted step: f <= 0 gives FWentNonpositive, h > 0 gives
/// HWentNonnegative, and a non-finite component gives NonFinite. An h that
/// reaches zero by gradual underflow (the previous accepted h was already
/// subnormal) is the far-field fixed point and not a failure; an h that
/// jumps from a normal negative value straight to zero is.
///
/// Throws std::invalid_argument when start.r >= 0 or r_target >= start.r.
Trajectory integrate(const PhaseState& start, double r_target, const StepControl& control = {});

}  // namespace kecone
