#pragma once

#include "ctrlscore/gramian.hpp"
#include "ctrlscore/system.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ctrlscore {

/// N sampled state trajectories on a shared time grid; states[l] holds the
/// n x N matrix whose column k is trajectory k at times[l].
struct TrajectoryBundle {
    int n = 0;
    int count = 0;
    std::vector<double> times;
    std::vector<Eigen::MatrixXd> states;
};

struct SpanReport {
    bool spanning = false;
    int rank = 0;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
};

/// Whether the initial states span the full state space (numerical rank of
/// the first sample equals n).
SpanReport check_spanning(const TrajectoryBundle& bundle);

struct DataDrivenOptions {
    /// When false (default), a rank-deficient sample matrix at any grid point
    /// is an error; when true, the least-squares/least-norm solution is used
    /// and the result degrades gracefully.
    bool allow_rank_deficient = false;
};

/// Gramian approximation from trajectory data alone: at each grid point the
/// minimum-norm solutions of X(t) alpha = e_i are obtained from one singular
/// value decomposition shared across all i, and the integrals are accumulated
/// with trapezoidal weights using X(t_m) as the outer factor.
GramianSet gramians_datadriven(const TrajectoryBundle& bundle,
                               const DataDrivenOptions& opts = {});

/// Synthetic observation generator: initial states uniform on the unit
/// sphere (normalized Gaussians), propagated exactly on the integration grid.
/// Deterministic for a fixed seed.
TrajectoryBundle generate_trajectories(const TemporalSystem& sys, int count, double dt,
                                       std::uint64_t seed);

/// Delimited text: header "t,traj_id,x1,...,xn", one row per grid point and
/// trajectory, doubles written exactly.
void save_trajectories(const TrajectoryBundle& bundle, std::ostream& out);
void save_trajectories(const TrajectoryBundle& bundle, const std::string& path);
TrajectoryBundle load_trajectories(std::istream& in);
TrajectoryBundle load_trajectories(const std::string& path);

}  // namespace ctrlscore
