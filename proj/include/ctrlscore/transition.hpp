#pragma once

#include "ctrlscore/system.hpp"

#include <Eigen/Dense>

#include <vector>

namespace ctrlscore {

/// e^{sM} via scaling-and-squaring with a Pade approximant.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& M, double s = 1.0);

/// Integration grid for a piecewise system: every segment is subdivided into
/// ceil(duration / dt) equal substeps of length <= dt, so segment boundaries
/// are exact grid points and no step crosses a switching instant.
/// Zero-duration segments contribute no substeps.
struct TimeGrid {
    std::vector<double> times;            // ascending, times.front() == 0, times.back() == t_m
    std::vector<std::size_t> segment_of;  // per interval [times[l], times[l+1]]: segment index

    std::size_t size() const { return times.size(); }
};

TimeGrid build_time_grid(const TemporalSystem& sys, double dt);

/// Number of equal substeps a segment of the given duration receives at step
/// size dt (ceil(duration / dt), at least one for positive durations).
std::size_t substep_count(double duration, double dt);

/// Trapezoidal quadrature weights for a (possibly nonuniform) ascending grid.
std::vector<double> trapezoid_weights(const std::vector<double>& times);

/// Solution Y(t) of Y' = -A(t)^T Y, Y(t_m) = I on a TimeGrid, so that
/// Y(t) equals the transpose of the state transition matrix from t to t_m.
struct AdjointTrajectory {
    std::vector<double> times;
    std::vector<Eigen::MatrixXd> values;

    /// Transition matrix from times[l] to the final time (the transpose of
    /// the stored value).
    Eigen::MatrixXd transition_from(std::size_t l) const { return values[l].transpose(); }
};

/// Integrates the adjoint equation backward from t_m. Constant segments are
/// stepped with exact matrix exponentials; analytic segments with classical
/// fixed-step RK4.
AdjointTrajectory propagate_adjoint(const TemporalSystem& sys, double dt);

/// Forward propagation of x' = A(t) x sampled on the same grid.
struct StateTrajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
};

StateTrajectory propagate_state(const TemporalSystem& sys, const Eigen::VectorXd& x0, double dt);

/// Forward propagation of a whole block of initial states (columns of X0).
std::vector<Eigen::MatrixXd> propagate_states(const TemporalSystem& sys,
                                              const Eigen::MatrixXd& X0, const TimeGrid& grid);

}  // namespace ctrlscore
