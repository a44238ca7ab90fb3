#include "ctrlscore/transition.hpp"

#include "ctrlscore/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace ctrlscore {

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& M, double s) {
    if (M.rows() != M.cols()) {
        throw ValidationError("matrix exponential needs a square matrix");
    }
    if (!M.allFinite() || !std::isfinite(s)) {
        throw ValidationError("matrix exponential needs finite entries");
    }
    return (s * M).exp();
}

std::size_t substep_count(double duration, double dt) {
    if (duration <= 0.0) return 0;
    auto steps = static_cast<std::size_t>(std::ceil(duration / dt - 1e-12));
    return steps == 0 ? 1 : steps;
}

TimeGrid build_time_grid(const TemporalSystem& sys, double dt) {
    if (!(dt > 0.0)) {
        throw ValidationError("step size must be positive");
    }
    if (!(sys.final_time() > 0.0)) {
        throw ValidationError("zero horizon: total duration must be positive");
    }
    TimeGrid grid;
    grid.times.push_back(0.0);
    const auto& segs = sys.segments();
    const auto& switches = sys.switch_times();
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const double len = segs[k].duration;
        if (len <= 0.0) continue;
        const std::size_t steps = substep_count(len, dt);
        const double h = len / static_cast<double>(steps);
        for (std::size_t j = 1; j <= steps; ++j) {
            // Boundary hit exactly; interior points from the left edge.
            const double t = (j == steps) ? switches[k + 1]
                                          : switches[k] + h * static_cast<double>(j);
            grid.times.push_back(t);
            grid.segment_of.push_back(k);
        }
    }
    return grid;
}

std::vector<double> trapezoid_weights(const std::vector<double>& times) {
    const std::size_t m = times.size();
    std::vector<double> w(m, 0.0);
    for (std::size_t l = 0; l + 1 < m; ++l) {
        const double h = times[l + 1] - times[l];
        w[l] += 0.5 * h;
        w[l + 1] += 0.5 * h;
    }
    return w;
}

namespace {

// One classical RK4 step of M' = sign * A(t)^T_or_plain M, expressed through a
// generic right-hand side to serve both the adjoint and the state equation.
template <typename Rhs>
Eigen::MatrixXd rk4_step(const Rhs& rhs, double t, double h, const Eigen::MatrixXd& M) {
    const Eigen::MatrixXd k1 = rhs(t, M);
    const Eigen::MatrixXd k2 = rhs(t + 0.5 * h, M + (0.5 * h) * k1);
    const Eigen::MatrixXd k3 = rhs(t + 0.5 * h, M + (0.5 * h) * k2);
    const Eigen::MatrixXd k4 = rhs(t + h, M + h * k3);
    return M + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

[[noreturn]] void blow_up(double t) {
    throw NumericalError("propagation blow-up: non-finite values at t = " + std::to_string(t));
}

}  // namespace

AdjointTrajectory propagate_adjoint(const TemporalSystem& sys, double dt) {
    const TimeGrid grid = build_time_grid(sys, dt);
    const int n = sys.dimension();
    const auto& segs = sys.segments();
    const auto& switches = sys.switch_times();

    AdjointTrajectory traj;
    traj.times = grid.times;
    traj.values.assign(grid.size(), Eigen::MatrixXd());
    traj.values.back() = Eigen::MatrixXd::Identity(n, n);

    // Exact stepping matrices e^{A_k^T h} cached per (segment, substep length).
    Eigen::MatrixXd cached_step;
    std::size_t cached_segment = segs.size();

    for (std::size_t l = grid.size() - 1; l-- > 0;) {
        const std::size_t k = grid.segment_of[l];
        const double h = grid.times[l + 1] - grid.times[l];
        const Eigen::MatrixXd& y_right = traj.values[l + 1];
        if (segs[k].is_constant()) {
            if (k != cached_segment) {
                cached_step = matrix_exponential(segs[k].constant().transpose(), h);
                cached_segment = k;
            }
            traj.values[l] = cached_step * y_right;
        } else {
            const auto& eval = std::get<AnalyticMatrix>(segs[k].source).evaluate;
            const double t0 = switches[k];
            auto rhs = [&](double t, const Eigen::MatrixXd& Y) -> Eigen::MatrixXd {
                return -eval(t - t0).transpose() * Y;
            };
            traj.values[l] = rk4_step(rhs, grid.times[l + 1], -h, y_right);
        }
        if (!traj.values[l].allFinite()) blow_up(grid.times[l]);
    }
    return traj;
}

std::vector<Eigen::MatrixXd> propagate_states(const TemporalSystem& sys,
                                              const Eigen::MatrixXd& X0, const TimeGrid& grid) {
    if (X0.rows() != sys.dimension()) {
        throw ValidationError("initial state dimension does not match the system");
    }
    const auto& segs = sys.segments();
    const auto& switches = sys.switch_times();

    std::vector<Eigen::MatrixXd> values;
    values.reserve(grid.size());
    values.push_back(X0);

    Eigen::MatrixXd cached_step;
    std::size_t cached_segment = segs.size();

    for (std::size_t l = 0; l + 1 < grid.size(); ++l) {
        const std::size_t k = grid.segment_of[l];
        const double h = grid.times[l + 1] - grid.times[l];
        if (segs[k].is_constant()) {
            if (k != cached_segment) {
                cached_step = matrix_exponential(segs[k].constant(), h);
                cached_segment = k;
            }
            values.push_back(cached_step * values.back());
        } else {
            const auto& eval = std::get<AnalyticMatrix>(segs[k].source).evaluate;
            const double t0 = switches[k];
            auto rhs = [&](double t, const Eigen::MatrixXd& X) -> Eigen::MatrixXd {
                return eval(t - t0) * X;
            };
            values.push_back(rk4_step(rhs, grid.times[l], h, values.back()));
        }
        if (!values.back().allFinite()) blow_up(grid.times[l + 1]);
    }
    return values;
}

StateTrajectory propagate_state(const TemporalSystem& sys, const Eigen::VectorXd& x0, double dt) {
    const TimeGrid grid = build_time_grid(sys, dt);
    const std::vector<Eigen::MatrixXd> block = propagate_states(sys, x0, grid);
    StateTrajectory traj;
    traj.times = grid.times;
    traj.states.reserve(block.size());
    for (const Eigen::MatrixXd& X : block) {
        traj.states.emplace_back(X.col(0));
    }
    return traj;
}

}  // namespace ctrlscore
