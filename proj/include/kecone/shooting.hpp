#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "kecone/ode_core.hpp"

namespace kecone {

/// Boundary parameter tau = -1/h(0) = 1/b(t*)^2 plus numerical controls.
struct ShootingConfig {
    double tau = 1.0;
    double r0 = -1e-5;
    double r_end = -500.0;
    StepControl control{};

    /// Throws std::invalid_argument unless tau > 0, r_end < r0 < 0 and the
    /// step control is valid.
    void validate() const;
};

struct ShootingResult {
    Trajectory trajectory;
    /// f(r_end); present only when the trajectory reached r_end.
    std::optional<double> alpha_sq;
    std::optional<double> beta;

    [[nodiscard]] TerminationStatus status() const noexcept { return trajectory.status; }
    [[nodiscard]] bool succeeded() const noexcept { return trajectory.succeeded(); }
};

struct SweepRecord {
    double tau = 0.0;
    std::optional<double> alpha_sq;
    std::optional<double> beta;
    std::optional<double> t_max;
    /// |f(r_end) - f(r_end / 2)|, a measure of how flat the far field is.
    std::optional<double> stabilization_residual;
    TerminationStatus status = TerminationStatus::ReachedEnd;
};

/// alpha^2 = (1 + 2 beta) / 6 and its inverse.
constexpr double alpha_sq_from_beta(double beta) { return (1.0 + 2.0 * beta) / 6.0; }
constexpr double beta_from_alpha_sq(double alpha_sq) { return (6.0 * alpha_sq - 1.0) / 2.0; }

/// First-order Taylor data at r0: (r0, -r0/tau, -1/tau).
PhaseState seed_state(const ShootingConfig& config);

ShootingResult shoot(const ShootingConfig& config);

/// f at `r` by linear interpolation between the trajectory's nodes.
/// Throws std::out_of_range when r is outside the sampled range.
double sample_f_at(const Trajectory& trajectory, double r);

/// One record per tau, in input order. Records are computed on up to
/// `threads` worker threads (0 picks the hardware concurrency).
std::vector<SweepRecord> sweep(std::span<const double> tau_values, const ShootingConfig& base,
                               unsigned threads = 0);

/// Inclusive grids used by the sweep front end.
std::vector<double> linear_grid(double lo, double hi, std::size_t count);
std::vector<double> log_grid(double lo, double hi, std::size_t count);

class NoBracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TrajectoryFailure : public std::runtime_error {
public:
    TrajectoryFailure(double tau, TerminationStatus status);
    [[nodiscard]] double tau() const noexcept { return tau_; }
    [[nodiscard]] TerminationStatus status() const noexcept { return status_; }

private:
    double tau_;
    TerminationStatus status_;
};

struct TauSearchResult {
    double tau = 0.0;
    double beta = 0.0;
    std::size_t shots = 0;
};

/// Finds tau with |beta(shoot(tau)) - beta_target| < tol by bisection in
/// log(tau) on the decreasing map tau -> beta. The bracket starts at
/// [0.5, 1e4] and its upper end is doubled up to 1e8 when needed.
///
/// Throws std::invalid_argument for beta_target <= 1/4 or > 1.5,
/// NoBracketError when the target is not enclosed, TrajectoryFailure when a
/// shot fails.
TauSearchResult find_tau_for_beta(double beta_target, const ShootingConfig& base,
                                  double tol = 1e-4);

}  // namespace kecone
