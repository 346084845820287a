#include "kecone/metric_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kecone {

MetricProfile::MetricProfile(std::vector<ProfileRow> rows) : rows_(std::move(rows)) {
    if (!rows_.empty() && rows_.front().t != 0.0) {
        throw std::invalid_argument("profile: first row must have t = 0");
    }
    for (std::size_t i = 1; i < rows_.size(); ++i) {
        if (!(rows_[i].t >= rows_[i - 1].t)) {
            throw std::invalid_argument("profile: t must be nondecreasing");
        }
    }
}

GeodesicRange compute_t_of_r(std::span<const PhaseState> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("compute_t_of_r: empty trajectory");
    }
    for (const auto& s : samples) {
        if (s.h > 0.0 || !std::isfinite(s.h)) {
            throw std::invalid_argument("compute_t_of_r: h must be negative");
        }
    }

    // Accumulate from the far end (last sample, r_end) towards r0.
    const std::size_t n = samples.size();
    GeodesicRange out;
    out.t_values.assign(n, 0.0);
    double t = 0.0;
    for (std::size_t i = n - 1; i-- > 0;) {
        const double dr = samples[i].r - samples[i + 1].r;
        t += 0.5 * dr * (std::sqrt(-samples[i].h) + std::sqrt(-samples[i + 1].h));
        out.t_values[i] = t;
    }
    out.t_max = out.t_values.front();
    return out;
}

MetricProfile build_profile(std::span<const PhaseState> samples) {
    const GeodesicRange range = compute_t_of_r(samples);
    std::vector<ProfileRow> rows;
    rows.reserve(samples.size());
    for (std::size_t k = samples.size(); k-- > 0;) {
        const PhaseState& s = samples[k];
        ProfileRow row;
        row.t = range.t_values[k];
        row.r = s.r;
        row.f = s.f;
        row.R = -std::tanh(s.r);
        row.a = std::sqrt(s.f * row.R);
        row.b = std::sqrt(s.f / row.R);
        row.c = std::sqrt(-s.h);
        rows.push_back(row);
    }
    return MetricProfile(std::move(rows));
}

std::vector<ResampledRow> resample_profile_in_t(const MetricProfile& profile,
                                                std::span<const double> t_grid) {
    std::vector<ResampledRow> out;
    if (t_grid.empty()) {
        return out;
    }
    const auto rows = profile.rows();
    if (rows.empty()) {
        throw std::domain_error("resample: empty profile");
    }
    const double t_max = profile.t_max();
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        if (!(t >= 0.0) || !(t <= t_max)) {
            throw std::domain_error("resample: grid point outside [0, t_max]");
        }
        // First row with row.t >= t.
        auto it = std::lower_bound(rows.begin(), rows.end(), t,
                                   [](const ProfileRow& row, double x) { return row.t < x; });
        const ProfileRow& hi = *it;
        if (it == rows.begin() || hi.t == t) {
            out.push_back({t, hi.f, hi.R, hi.c_sq()});
            continue;
        }
        const ProfileRow& lo = *(it - 1);
        const double w = (t - lo.t) / (hi.t - lo.t);
        auto lerp = [w](double x0, double x1) { return x0 + w * (x1 - x0); };
        out.push_back({t, lerp(lo.f, hi.f), lerp(lo.R, hi.R), lerp(lo.c_sq(), hi.c_sq())});
    }
    return out;
}

ComparisonReport compare_to_p114(const MetricProfile& profile, std::size_t sample_count) {
    return compare_to_reference(profile, ReferenceModel::P114, sample_count);
}

ComparisonReport compare_to_reference(const MetricProfile& profile, ReferenceModel model,
                                      std::size_t sample_count) {
    if (model == ReferenceModel::EguchiHanson) {
        throw std::invalid_argument("compare: the Eguchi-Hanson bubble is not parametrized by t");
    }
    ComparisonReport report;
    report.model = model;
    report.sample_count = sample_count;
    if (sample_count == 0 || profile.empty()) {
        report.sample_count = 0;
        return report;
    }

    const double t_hi = std::min(profile.t_max(), parameter_upper_bound(model));
    std::vector<double> grid;
    grid.reserve(sample_count);
    for (std::size_t i = 0; i < sample_count; ++i) {
        grid.push_back(sample_count == 1 ? 0.0
                                         : t_hi * static_cast<double>(i) /
                                               static_cast<double>(sample_count - 1));
    }
    grid.back() = sample_count == 1 ? 0.0 : t_hi;

    for (const ResampledRow& row : resample_profile_in_t(profile, grid)) {
        const MetricCoefficients ref = eval_abc_of_t(model, row.t);
        report.sup_error_f = std::max(report.sup_error_f, std::abs(row.f - ref.a * ref.b));
        report.sup_error_R = std::max(report.sup_error_R, std::abs(row.R - ref.a / ref.b));
        report.sup_error_csq = std::max(report.sup_error_csq, std::abs(row.c_sq - ref.c * ref.c));
    }
    return report;
}

std::vector<BubbleRow> bubble_rescale(std::span<const PhaseState> samples, double tau) {
    std::vector<BubbleRow> out;
    out.reserve(samples.size());
    for (const PhaseState& s : samples) {
        out.push_back({s.r, s.f * tau, s.h * tau});
    }
    return out;
}

BubbleErrors bubble_sup_errors(std::span<const BubbleRow> rows, double window_min) {
    BubbleErrors errors;
    for (const BubbleRow& row : rows) {
        if (row.r < window_min || row.r > 0.0) {
            continue;
        }
        const BubbleTarget target = eval_bubble_targets(row.r);
        errors.sup_error_f = std::max(errors.sup_error_f, std::abs(row.f_scaled - target.f_limit));
        errors.sup_error_h = std::max(errors.sup_error_h, std::abs(row.h_scaled - target.h_limit));
        ++errors.sample_count;
    }
    return errors;
}

}  // namespace kecone
