#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kecone/ode_core.hpp"
#include "kecone/reference_solutions.hpp"

namespace kecone {

/// Geometric data at one trajectory node. t is the geodesic distance from
/// the P1 orbit, truncated so that t(r_end) = 0.
struct ProfileRow {
    double t = 0.0;
    double r = 0.0;
    double f = 0.0;
    double R = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    [[nodiscard]] double c_sq() const noexcept { return c * c; }
};

/// Rows ordered by increasing t (equivalently increasing r).
class MetricProfile {
public:
    MetricProfile() = default;
    /// Throws std::invalid_argument unless t is nondecreasing and starts at 0.
    explicit MetricProfile(std::vector<ProfileRow> rows);

    [[nodiscard]] std::span<const ProfileRow> rows() const noexcept { return rows_; }
    [[nodiscard]] bool empty() const noexcept { return rows_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }
    [[nodiscard]] double t_max() const noexcept { return rows_.empty() ? 0.0 : rows_.back().t; }

private:
    std::vector<ProfileRow> rows_;
};

struct GeodesicRange {
    /// One t per trajectory sample, in sample order (decreasing r).
    std::vector<double> t_values;
    double t_max = 0.0;
};

struct ResampledRow {
    double t = 0.0;
    double f = 0.0;
    double R = 0.0;
    double c_sq = 0.0;
};

struct ComparisonReport {
    ReferenceModel model = ReferenceModel::P114;
    double sup_error_f = 0.0;
    double sup_error_R = 0.0;
    double sup_error_csq = 0.0;
    std::size_t sample_count = 0;
};

struct BubbleRow {
    double r = 0.0;
    double f_scaled = 0.0;
    double h_scaled = 0.0;
};

struct BubbleErrors {
    double sup_error_f = 0.0;
    double sup_error_h = 0.0;
    std::size_t sample_count = 0;
};

/// Left edge of the window used for bubble comparisons.
inline constexpr double kBubbleWindowMin = -12.0;

/// t(r) = integral of sqrt(-h) dr from r_end, by the composite trapezoid
/// rule on the trajectory's own nodes. Throws std::invalid_argument for an
/// empty trajectory or any h > 0 (an h of exactly zero from far-field
/// underflow contributes nothing).
GeodesicRange compute_t_of_r(std::span<const PhaseState> samples);

/// Rows (t, r, f, R, a, b, c) with R = -tanh(r), a = sqrt(fR), b = sqrt(f/R),
/// c = sqrt(-h).
MetricProfile build_profile(std::span<const PhaseState> samples);

/// Piecewise-linear interpolation of f, R and c^2 onto t_grid. Throws
/// std::domain_error for grid points outside [0, t_max].
std::vector<ResampledRow> resample_profile_in_t(const MetricProfile& profile,
                                                std::span<const double> t_grid);

/// Sup-norm distance of (f, R, c^2) from the P(1,1,4) closed forms
/// (cos^2 t / 4, 1, sin^2 2t / 4) over sample_count uniform points of
/// [0, min(t_max, pi/2)], endpoints included.
ComparisonReport compare_to_p114(const MetricProfile& profile, std::size_t sample_count = 1000);

/// Same comparison against any geodesically parametrized model, with
/// references ab, a/b and c^2 over [0, min(t_max, t*)]. Throws
/// std::invalid_argument for EguchiHanson.
ComparisonReport compare_to_reference(const MetricProfile& profile, ReferenceModel model,
                                      std::size_t sample_count = 1000);

/// (r, f tau, h tau) per sample.
std::vector<BubbleRow> bubble_rescale(std::span<const PhaseState> samples, double tau);

/// Sup distance of rescaled rows from (-sinh r, -cosh r) over r >= window_min.
BubbleErrors bubble_sup_errors(std::span<const BubbleRow> rows,
                               double window_min = kBubbleWindowMin);

}  // namespace kecone
