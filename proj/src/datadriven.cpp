#include "ctrlscore/datadriven.hpp"

#include "ctrlscore/errors.hpp"
#include "ctrlscore/transition.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <utility>

namespace ctrlscore {

namespace {

double rank_tolerance(int n, int count, double sigma_max) {
    return std::max(n, count) * std::numeric_limits<double>::epsilon() * sigma_max;
}

void validate_bundle(const TrajectoryBundle& bundle) {
    if (bundle.n < 1 || bundle.count < 1) {
        throw ValidationError("trajectory bundle is empty");
    }
    if (bundle.times.size() < 2 || bundle.times.size() != bundle.states.size()) {
        throw ValidationError("trajectory bundle needs at least two grid points");
    }
    for (std::size_t l = 0; l < bundle.states.size(); ++l) {
        if (bundle.states[l].rows() != bundle.n || bundle.states[l].cols() != bundle.count) {
            throw ValidationError("trajectory bundle has inconsistent sample dimensions");
        }
        if (l > 0 && !(bundle.times[l] > bundle.times[l - 1])) {
            throw ValidationError("trajectory bundle grid is not strictly increasing");
        }
    }
}

}  // namespace

SpanReport check_spanning(const TrajectoryBundle& bundle) {
    validate_bundle(bundle);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(bundle.states.front());
    const Eigen::VectorXd& sigma = svd.singularValues();
    SpanReport report;
    report.sigma_max = sigma.maxCoeff();
    report.sigma_min = sigma.minCoeff();
    const double tol = rank_tolerance(bundle.n, bundle.count, report.sigma_max);
    report.rank = static_cast<int>((sigma.array() > tol).count());
    report.spanning = report.rank == bundle.n;
    return report;
}

GramianSet gramians_datadriven(const TrajectoryBundle& bundle, const DataDrivenOptions& opts) {
    validate_bundle(bundle);
    const int n = bundle.n;
    const std::vector<double> w = trapezoid_weights(bundle.times);
    const Eigen::MatrixXd& final_states = bundle.states.back();

    std::vector<Eigen::MatrixXd> acc(n, Eigen::MatrixXd::Zero(n, n));
    for (std::size_t l = 0; l < bundle.times.size(); ++l) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(bundle.states[l],
                                              Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd& sigma = svd.singularValues();
        const double tol = rank_tolerance(n, bundle.count, sigma.maxCoeff());
        const int rank = static_cast<int>((sigma.array() > tol).count());
        if (rank < n && !opts.allow_rank_deficient) {
            throw NumericalError("trajectory samples do not span the state space at t = " +
                                 std::to_string(bundle.times[l]) + " (rank " +
                                 std::to_string(rank) + " of " + std::to_string(n) + ")");
        }
        // Column i of final_states * pinv(X(t)) is X(t_m) alpha_i.
        Eigen::VectorXd inv_sigma = Eigen::VectorXd::Zero(sigma.size());
        for (int r = 0; r < rank; ++r) inv_sigma(r) = 1.0 / sigma(r);
        const Eigen::MatrixXd propagated = (final_states * svd.matrixV()) *
                                           inv_sigma.asDiagonal() * svd.matrixU().transpose();
        for (int i = 0; i < n; ++i) {
            acc[i].noalias() += w[l] * (propagated.col(i) * propagated.col(i).transpose());
        }
    }

    GramianSet gs;
    gs.n = n;
    gs.backend = "datadriven";
    gs.params = "N=" + std::to_string(bundle.count);
    gs.W.reserve(n);
    for (int i = 0; i < n; ++i) {
        gs.W.push_back(enforce_gramian_psd(acc[i], "datadriven W_" + std::to_string(i + 1)));
    }
    return gs;
}

TrajectoryBundle generate_trajectories(const TemporalSystem& sys, int count, double dt,
                                       std::uint64_t seed) {
    if (count < 1) throw ValidationError("trajectory count must be at least 1");
    const int n = sys.dimension();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd x0(n, count);
    for (int k = 0; k < count; ++k) {
        Eigen::VectorXd g(n);
        do {
            for (int i = 0; i < n; ++i) g(i) = gauss(rng);
        } while (g.norm() == 0.0);
        x0.col(k) = g / g.norm();
    }

    const TimeGrid grid = build_time_grid(sys, dt);
    TrajectoryBundle bundle;
    bundle.n = n;
    bundle.count = count;
    bundle.times = grid.times;
    bundle.states = propagate_states(sys, x0, grid);
    return bundle;
}

void save_trajectories(const TrajectoryBundle& bundle, std::ostream& out) {
    validate_bundle(bundle);
    out << "t,traj_id";
    for (int i = 1; i <= bundle.n; ++i) out << ",x" << i;
    out << "\n";
    out.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t l = 0; l < bundle.times.size(); ++l) {
        for (int k = 0; k < bundle.count; ++k) {
            out << bundle.times[l] << "," << (k + 1);
            for (int i = 0; i < bundle.n; ++i) out << "," << bundle.states[l](i, k);
            out << "\n";
        }
    }
}

void save_trajectories(const TrajectoryBundle& bundle, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    save_trajectories(bundle, out);
    if (!out) throw ValidationError("failed writing '" + path + "'");
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

TrajectoryBundle load_trajectories(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty trajectory file");
    const std::vector<std::string> header = split_csv(line);
    if (header.size() < 3 || header[0] != "t" || header[1] != "traj_id") {
        throw ValidationError("trajectory file: bad header (expected t,traj_id,x1,...)");
    }
    const int n = static_cast<int>(header.size()) - 2;

    TrajectoryBundle bundle;
    bundle.n = n;
    std::vector<double> row_time;
    std::vector<Eigen::VectorXd> row_state;
    std::vector<int> row_id;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv(line);
        if (fields.size() != header.size()) {
            throw ValidationError("trajectory file line " + std::to_string(line_no) +
                                  ": wrong field count");
        }
        try {
            row_time.push_back(std::stod(fields[0]));
            row_id.push_back(std::stoi(fields[1]));
            Eigen::VectorXd x(n);
            for (int i = 0; i < n; ++i) x(i) = std::stod(fields[2 + i]);
            row_state.push_back(std::move(x));
        } catch (const std::exception&) {
            throw ValidationError("trajectory file line " + std::to_string(line_no) +
                                  ": unparsable number");
        }
    }
    if (row_time.empty()) throw ValidationError("trajectory file has no data rows");

    // Rows arrive grouped by grid point, trajectory ids 1..N in order.
    int count = 0;
    while (count < static_cast<int>(row_id.size()) && row_id[count] == count + 1 &&
           row_time[count] == row_time[0]) {
        ++count;
    }
    if (count == 0 || row_id.size() % count != 0) {
        throw ValidationError("trajectory file: inconsistent trajectory count");
    }
    bundle.count = count;

    const std::size_t points = row_id.size() / count;
    bundle.times.reserve(points);
    bundle.states.reserve(points);
    for (std::size_t l = 0; l < points; ++l) {
        Eigen::MatrixXd X(n, count);
        const double t = row_time[l * count];
        for (int k = 0; k < count; ++k) {
            const std::size_t r = l * count + k;
            if (row_id[r] != k + 1 || row_time[r] != t) {
                throw ValidationError("trajectory file: rows out of order near t = " +
                                      std::to_string(t));
            }
            X.col(k) = row_state[r];
        }
        if (l > 0 && !(t > bundle.times.back())) {
            throw ValidationError("trajectory file: grid not strictly increasing at t = " +
                                  std::to_string(t));
        }
        bundle.times.push_back(t);
        bundle.states.push_back(std::move(X));
    }
    validate_bundle(bundle);
    return bundle;
}

TrajectoryBundle load_trajectories(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    return load_trajectories(in);
}

}  // namespace ctrlscore
