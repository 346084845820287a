#include "kecone/shooting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "kecone/metric_geometry.hpp"

namespace kecone {

namespace {

constexpr double kBracketLow = 0.5;
constexpr double kBracketHigh = 1e4;
constexpr double kBracketCap = 1e8;
constexpr int kMaxBisections = 200;

SweepRecord make_record(double tau, const ShootingConfig& base) {
    ShootingConfig config = base;
    config.tau = tau;
    SweepRecord record;
    record.tau = tau;

    const ShootingResult result = shoot(config);
    record.status = result.status();
    if (!result.succeeded()) {
        return record;
    }
    record.alpha_sq = result.alpha_sq;
    record.beta = result.beta;
    record.stabilization_residual =
        std::abs(*result.alpha_sq - sample_f_at(result.trajectory, 0.5 * config.r_end));
    try {
        record.t_max = compute_t_of_r(result.trajectory.samples).t_max;
    } catch (const std::invalid_argument&) {
        // h >= 0 somewhere; the record keeps alpha_sq but no geodesic range.
    }
    return record;
}

}  // namespace

void ShootingConfig::validate() const {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("shooting: tau must be positive and finite");
    }
    if (!(r0 < 0.0) || !(r_end < r0)) {
        throw std::invalid_argument("shooting: require r_end < r0 < 0");
    }
    control.validate();
}

PhaseState seed_state(const ShootingConfig& config) {
    config.validate();
    return {config.r0, -config.r0 / config.tau, -1.0 / config.tau};
}

ShootingResult shoot(const ShootingConfig& config) {
    const PhaseState seed = seed_state(config);
    ShootingResult result;
    result.trajectory = integrate(seed, config.r_end, config.control);
    if (result.trajectory.succeeded()) {
        result.alpha_sq = result.trajectory.back().f;
        result.beta = beta_from_alpha_sq(*result.alpha_sq);
    }
    return result;
}

double sample_f_at(const Trajectory& trajectory, double r) {
    const auto& s = trajectory.samples;
    if (s.empty() || r > s.front().r || r < s.back().r) {
        throw std::out_of_range("sample_f_at: r outside the trajectory");
    }
    // Samples are ordered by decreasing r.
    auto it = std::lower_bound(s.begin(), s.end(), r,
                               [](const PhaseState& p, double x) { return p.r > x; });
    if (it == s.begin()) {
        return it->f;
    }
    const PhaseState& hi = *(it - 1);
    const PhaseState& lo = *it;
    const double w = (hi.r - r) / (hi.r - lo.r);
    return hi.f + w * (lo.f - hi.f);
}

std::vector<SweepRecord> sweep(std::span<const double> tau_values, const ShootingConfig& base,
                               unsigned threads) {
    for (double tau : tau_values) {
        if (!(tau > 0.0)) {
            throw std::invalid_argument("sweep: tau values must be positive");
        }
    }
    std::vector<SweepRecord> records(tau_values.size());
    if (records.empty()) {
        return records;
    }
    base.control.validate();

    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(records.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < records.size(); i = next++) {
            records[i] = make_record(tau_values[i], base);
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) {
        pool.emplace_back(worker);
    }
    pool.clear();
    return records;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
    std::vector<double> grid;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        grid.push_back(count == 1 ? lo
                                  : lo + (hi - lo) * static_cast<double>(i) /
                                             static_cast<double>(count - 1));
    }
    return grid;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi > 0.0)) {
        throw std::invalid_argument("log_grid: bounds must be positive");
    }
    std::vector<double> grid = linear_grid(std::log(lo), std::log(hi), count);
    for (double& x : grid) {
        x = std::exp(x);
    }
    if (!grid.empty()) {
        grid.front() = lo;
        grid.back() = count == 1 ? lo : hi;
    }
    return grid;
}

TrajectoryFailure::TrajectoryFailure(double tau, TerminationStatus status)
    : std::runtime_error("trajectory failed at tau = " + std::to_string(tau) + ": " +
                         std::string(to_string(status))),
      tau_(tau),
      status_(status) {}

TauSearchResult find_tau_for_beta(double beta_target, const ShootingConfig& base, double tol) {
    if (!(beta_target > 0.25) || !(beta_target <= 1.5)) {
        throw std::invalid_argument("find_tau_for_beta: target must lie in (1/4, 1.5]; "
                                    "no solution exists for beta <= 1/4");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("find_tau_for_beta: tol must be positive");
    }

    TauSearchResult out;
    auto beta_at = [&](double tau) {
        ShootingConfig config = base;
        config.tau = tau;
        const ShootingResult r = shoot(config);
        ++out.shots;
        if (!r.succeeded()) {
            throw TrajectoryFailure(tau, r.status());
        }
        return *r.beta;
    };

    double lo = kBracketLow;
    double hi = kBracketHigh;
    double beta_lo = beta_at(lo);
    if (std::abs(beta_lo - beta_target) < tol) {
        out.tau = lo;
        out.beta = beta_lo;
        return out;
    }
    if (beta_lo < beta_target) {
        throw NoBracketError("find_tau_for_beta: target above beta(0.5)");
    }
    double beta_hi = beta_at(hi);
    while (beta_hi > beta_target) {
        if (std::abs(beta_hi - beta_target) < tol) {
            out.tau = hi;
            out.beta = beta_hi;
            return out;
        }
        if (hi >= kBracketCap) {
            throw NoBracketError("find_tau_for_beta: target not enclosed up to tau = 1e8; "
                                 "beta must exceed 1/4");
        }
        lo = hi;
        beta_lo = beta_hi;
        hi *= 2.0;
        beta_hi = beta_at(hi);
    }

    for (int i = 0; i < kMaxBisections; ++i) {
        const double mid = std::sqrt(lo * hi);
        const double beta_mid = beta_at(mid);
        if (std::abs(beta_mid - beta_target) < tol || (hi - lo) <= 1e-14 * mid) {
            out.tau = mid;
            out.beta = beta_mid;
            return out;
        }
        if (beta_mid > beta_target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.tau = std::sqrt(lo * hi);
    out.beta = beta_at(out.tau);
    return out;
}

}  // namespace kecone
