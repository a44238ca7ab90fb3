#include "ctrlscore/centrality.hpp"

#include "ctrlscore/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace ctrlscore {

CentralityTable make_centrality_table(std::string name, Eigen::VectorXd values) {
    CentralityTable table;
    table.name = std::move(name);
    table.values = std::move(values);
    table.ranking.resize(table.values.size());
    std::iota(table.ranking.begin(), table.ranking.end(), 0);
    std::stable_sort(table.ranking.begin(), table.ranking.end(),
                     [&](int a, int b) { return table.values(a) > table.values(b); });
    return table;
}

EnergyCentralities control_energy_centralities(const GramianSet& gs) {
    const int n = gs.n;
    Eigen::VectorXd vce(n), ace(n), ac(n);
    for (int i = 0; i < n; ++i) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gs.W[i], Eigen::EigenvaluesOnly);
        const Eigen::VectorXd& lambda = eig.eigenvalues();
        const double lmax = std::max(lambda.maxCoeff(), 0.0);
        const double tol =
            std::max(n * std::numeric_limits<double>::epsilon() * lmax, 1e-12 * lmax);
        double log_prod = 0.0;
        double inv_trace = 0.0;
        for (int j = 0; j < n; ++j) {
            if (lambda(j) > tol) {
                log_prod += std::log(lambda(j));
                inv_trace += 1.0 / lambda(j);
            }
        }
        vce(i) = log_prod;
        ace(i) = -inv_trace;
        ac(i) = lambda.sum();
    }
    return EnergyCentralities{make_centrality_table("vce", std::move(vce)),
                              make_centrality_table("ace", std::move(ace)),
                              make_centrality_table("ac", std::move(ac))};
}

std::vector<ScoreVector> generalized_scores(const TemporalSystem& sys, ScoreKind kind,
                                            const SolverOptions& opts, double dt) {
    if (!sys.all_constant()) {
        throw ValidationError("generalized scores require constant segments");
    }
    std::vector<ScoreVector> scores;
    scores.reserve(sys.segment_count());
    for (std::size_t k = 0; k < sys.segment_count(); ++k) {
        const Segment& seg = sys.segments()[k];
        try {
            TemporalSystem snapshot(sys.dimension(), {seg});
            Objective obj(kind, gramians_quadrature(snapshot, dt));
            scores.push_back(solve(obj, opts).p_star);
        } catch (const std::runtime_error& e) {
            throw NumericalError("snapshot " + std::to_string(k + 1) + ": " + e.what());
        }
    }
    return scores;
}

}  // namespace ctrlscore
