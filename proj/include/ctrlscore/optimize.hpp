#pragma once

#include "ctrlscore/gramian.hpp"
#include "ctrlscore/system.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace ctrlscore {

/// Point on the standard probability simplex.
struct ScoreVector {
    Eigen::VectorXd p;

    static ScoreVector uniform(int n);
    /// Throws unless all entries are nonnegative and sum to 1 within 1e-12.
    void validate() const;
};

/// Euclidean projection onto the simplex (sort-based, O(n log n)).
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v);

enum class ScoreKind {
    Volumetric,     // minimize -log det W(p)
    AverageEnergy,  // minimize tr(W(p)^{-1})
};

std::string to_string(ScoreKind kind);
ScoreKind score_kind_from_string(const std::string& name);

/// Convex objective over the simplex built from a set of per-node Gramians.
/// Infeasible points (W(p) not positive definite at tolerance
/// lambda_min > 1e-10 * lambda_max) evaluate to +infinity.
class Objective {
public:
    Objective(ScoreKind kind, GramianSet gramians);

    ScoreKind kind() const { return kind_; }
    int dimension() const { return gramians_.n; }
    const GramianSet& gramians() const { return gramians_; }

    double value(const Eigen::VectorXd& p) const;
    /// Gradient at a feasible point; throws NumericalError when W(p) is
    /// singular. One factorization of W(p) serves all n components.
    Eigen::VectorXd gradient(const Eigen::VectorXd& p) const;

    Eigen::MatrixXd assemble_matrix(const Eigen::VectorXd& p) const;

private:
    ScoreKind kind_;
    GramianSet gramians_;
    Eigen::MatrixXd stacked_;  // n^2 x n, column i = vec(W_i)
};

struct SolverOptions {
    double eps = 1e-7;     // terminal condition on ||p_k - p_{k+1}||
    double sigma = 1e-4;   // Armijo sufficient-decrease parameter, in (0,1)
    double rho = 0.5;      // backtracking factor, in (0,1)
    double alpha0 = 1.0;   // initial trial step
    int max_iters = 50000;
    int max_backtracks = 60;
    bool record_history = false;
    std::optional<Eigen::VectorXd> initial_point;  // defaults to uniform
};

struct SolveReport {
    ScoreVector p_star;
    double objective_value = 0.0;
    int iterations = 0;
    bool converged = false;
    double terminal_gap = 0.0;
    std::vector<double> objective_history;  // filled when record_history
    std::vector<double> step_history;
};

/// Backtracking line search: largest alpha in {alpha0, rho*alpha0, ...} whose
/// projected trial point satisfies the sufficient-decrease test.
double armijo_step(const Objective& obj, const Eigen::VectorXd& p, const Eigen::VectorXd& grad,
                   const SolverOptions& opts = {});

/// Projected gradient method with Armijo line search, started from the
/// uniform distribution (or opts.initial_point). The objective is monotone
/// nonincreasing along the iterates and every iterate stays feasible.
SolveReport solve(const Objective& obj, const SolverOptions& opts = {});

enum class CertificateVerdict { Regular, NearSingular, Singular };

std::string to_string(CertificateVerdict v);

/// Entrywise integrated squares of the transition matrix; regularity of this
/// matrix certifies strict convexity of both objectives and hence uniqueness
/// of the optimal score.
struct Certificate {
    Eigen::MatrixXd R;
    double det_R = 0.0;
    double min_singular_value = 0.0;
    double max_singular_value = 0.0;
    CertificateVerdict verdict = CertificateVerdict::Singular;
};

Certificate uniqueness_certificate(const TemporalSystem& sys, double dt);

}  // namespace ctrlscore
