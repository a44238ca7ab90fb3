#pragma once

#include "ctrlscore/gramian.hpp"
#include "ctrlscore/optimize.hpp"
#include "ctrlscore/system.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace ctrlscore {

/// Per-node values of a named centrality index plus the induced ranking
/// (node indices sorted by value descending, ties by index).
struct CentralityTable {
    std::string name;
    Eigen::VectorXd values;
    std::vector<int> ranking;
};

CentralityTable make_centrality_table(std::string name, Eigen::VectorXd values);

/// The three control energy centralities derived from per-node Gramians:
/// volumetric (sum of logs of the positive eigenvalues), average energy
/// (negative trace of the pseudoinverse) and average controllability (trace).
struct EnergyCentralities {
    CentralityTable vce;
    CentralityTable ace;
    CentralityTable ac;
};

EnergyCentralities control_energy_centralities(const GramianSet& gs);

/// Generalized (per-snapshot) controllability scores of a switched system:
/// each constant segment is scored as an LTI system on [0, duration].
std::vector<ScoreVector> generalized_scores(const TemporalSystem& sys, ScoreKind kind,
                                            const SolverOptions& opts, double dt);

}  // namespace ctrlscore
