#include "ctrlscore/optimize.hpp"

#include "ctrlscore/errors.hpp"
#include "ctrlscore/transition.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace ctrlscore {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasibilityTol = 1e-10;  // lambda_min > tol * lambda_max

}  // namespace

ScoreVector ScoreVector::uniform(int n) {
    if (n < 1) throw ValidationError("score dimension must be at least 1");
    return ScoreVector{Eigen::VectorXd::Constant(n, 1.0 / n)};
}

void ScoreVector::validate() const {
    if (p.size() < 1) throw ValidationError("empty score vector");
    if (p.minCoeff() < 0.0) throw ValidationError("score vector has a negative entry");
    if (std::abs(p.sum() - 1.0) > 1e-12) {
        throw ValidationError("score vector does not sum to 1");
    }
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
    if (!v.allFinite()) throw ValidationError("projection input has non-finite entries");
    const Eigen::Index n = v.size();
    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());

    double running = 0.0;
    double threshold = u[0] - 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        running += u[j];
        const double candidate = (running - 1.0) / static_cast<double>(j + 1);
        if (u[j] - candidate > 0.0) {
            threshold = candidate;
        } else {
            break;
        }
    }
    return (v.array() - threshold).max(0.0).matrix();
}

std::string to_string(ScoreKind kind) {
    return kind == ScoreKind::Volumetric ? "vcs" : "aecs";
}

ScoreKind score_kind_from_string(const std::string& name) {
    if (name == "vcs") return ScoreKind::Volumetric;
    if (name == "aecs") return ScoreKind::AverageEnergy;
    throw ValidationError("unknown score kind '" + name + "' (expected vcs or aecs)");
}

Objective::Objective(ScoreKind kind, GramianSet gramians)
    : kind_(kind), gramians_(std::move(gramians)) {
    if (gramians_.n < 1 || gramians_.W.size() != static_cast<std::size_t>(gramians_.n)) {
        throw ValidationError("Gramian set is inconsistent");
    }
    const int n = gramians_.n;
    stacked_.resize(static_cast<Eigen::Index>(n) * n, n);
    for (int i = 0; i < n; ++i) {
        stacked_.col(i) = Eigen::Map<const Eigen::VectorXd>(gramians_.W[i].data(),
                                                            static_cast<Eigen::Index>(n) * n);
    }
}

Eigen::MatrixXd Objective::assemble_matrix(const Eigen::VectorXd& p) const {
    if (p.size() != gramians_.n) {
        throw ValidationError("score vector dimension does not match the Gramian set");
    }
    const Eigen::VectorXd flat = stacked_ * p;
    Eigen::MatrixXd W = Eigen::Map<const Eigen::MatrixXd>(flat.data(), gramians_.n, gramians_.n);
    return 0.5 * (W + W.transpose());
}

double Objective::value(const Eigen::VectorXd& p) const {
    const Eigen::MatrixXd W = assemble_matrix(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(W, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const double lmax = lambda.maxCoeff();
    if (!(lmax > 0.0) || lambda.minCoeff() <= kFeasibilityTol * lmax) {
        return kInf;
    }
    if (kind_ == ScoreKind::Volumetric) {
        return -lambda.array().log().sum();
    }
    return lambda.array().inverse().sum();
}

Eigen::VectorXd Objective::gradient(const Eigen::VectorXd& p) const {
    const Eigen::MatrixXd W = assemble_matrix(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(W);
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const double lmax = lambda.maxCoeff();
    if (!(lmax > 0.0) || lambda.minCoeff() <= kFeasibilityTol * lmax) {
        throw NumericalError("gradient requested at a point where W(p) is singular");
    }
    const Eigen::MatrixXd& V = eig.eigenvectors();
    // grad_i = -tr(S W_i) with S = W^{-1} for the volumetric objective,
    // S = W^{-2} for the average-energy one; both are Frobenius inner
    // products against the same factorization.
    const int exponent = kind_ == ScoreKind::Volumetric ? 1 : 2;
    const Eigen::VectorXd inv_pow =
        exponent == 1 ? lambda.array().inverse().matrix().eval()
                      : lambda.array().square().inverse().matrix().eval();
    const Eigen::MatrixXd S = V * inv_pow.asDiagonal() * V.transpose();
    const Eigen::Map<const Eigen::VectorXd> s_flat(S.data(),
                                                   static_cast<Eigen::Index>(S.size()));
    return -(stacked_.transpose() * s_flat);
}

namespace {

struct LineSearchResult {
    double alpha = 0.0;
    Eigen::VectorXd trial;
    double trial_value = kInf;
};

LineSearchResult armijo_search(const Objective& obj, const Eigen::VectorXd& p, double f_p,
                               const Eigen::VectorXd& grad, const SolverOptions& opts) {
    if (!(opts.sigma > 0.0 && opts.sigma < 1.0) || !(opts.rho > 0.0 && opts.rho < 1.0) ||
        !(opts.alpha0 > 0.0)) {
        throw ValidationError("line search parameters must satisfy sigma, rho in (0,1), alpha0 > 0");
    }
    LineSearchResult result;
    result.alpha = opts.alpha0;
    for (int trial = 0; trial < opts.max_backtracks; ++trial) {
        result.trial = project_simplex(p - result.alpha * grad);
        result.trial_value = obj.value(result.trial);
        const double decrease = grad.dot(result.trial - p);
        if (result.trial_value <= f_p + opts.sigma * decrease) {
            return result;
        }
        result.alpha *= opts.rho;
    }
    throw NumericalError("line search exceeded " + std::to_string(opts.max_backtracks) +
                         " backtracking steps");
}

}  // namespace

double armijo_step(const Objective& obj, const Eigen::VectorXd& p, const Eigen::VectorXd& grad,
                   const SolverOptions& opts) {
    return armijo_search(obj, p, obj.value(p), grad, opts).alpha;
}

SolveReport solve(const Objective& obj, const SolverOptions& opts) {
    const int n = obj.dimension();
    Eigen::VectorXd p =
        opts.initial_point ? project_simplex(*opts.initial_point) : ScoreVector::uniform(n).p;
    if (p.size() != n) {
        throw ValidationError("initial point dimension does not match the objective");
    }

    double f_p = obj.value(p);
    if (!std::isfinite(f_p)) {
        throw NumericalError(opts.initial_point
                                 ? "system not controllable under the starting allocation"
                                 : "system not controllable under uniform allocation");
    }

    SolveReport report;
    if (opts.record_history) report.objective_history.push_back(f_p);

    if (n == 1) {
        report.p_star = ScoreVector{p};
        report.objective_value = f_p;
        report.converged = true;
        return report;
    }

    for (int k = 0; k < opts.max_iters; ++k) {
        const Eigen::VectorXd grad = obj.gradient(p);
        const LineSearchResult step = armijo_search(obj, p, f_p, grad, opts);
        const double gap = (p - step.trial).norm();

        p = step.trial;
        f_p = step.trial_value;
        report.iterations = k + 1;
        report.terminal_gap = gap;
        if (opts.record_history) {
            report.objective_history.push_back(f_p);
            report.step_history.push_back(step.alpha);
        }
        if (gap <= opts.eps) {
            report.converged = true;
            break;
        }
    }

    report.p_star = ScoreVector{p};
    report.objective_value = f_p;
    return report;
}

std::string to_string(CertificateVerdict v) {
    switch (v) {
        case CertificateVerdict::Regular: return "regular";
        case CertificateVerdict::NearSingular: return "near-singular";
        case CertificateVerdict::Singular: return "singular";
    }
    return "unknown";
}

Certificate uniqueness_certificate(const TemporalSystem& sys, double dt) {
    const AdjointTrajectory adjoint = propagate_adjoint(sys, dt);
    const std::vector<double> w = trapezoid_weights(adjoint.times);
    const int n = sys.dimension();

    Certificate cert;
    cert.R = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t l = 0; l < adjoint.times.size(); ++l) {
        // R_ij integrates the square of the (i, j) transition-matrix entry.
        cert.R.noalias() +=
            w[l] * adjoint.values[l].transpose().cwiseAbs2();
    }

    cert.det_R = Eigen::PartialPivLU<Eigen::MatrixXd>(cert.R).determinant();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cert.R);
    cert.min_singular_value = svd.singularValues().minCoeff();
    cert.max_singular_value = svd.singularValues().maxCoeff();

    const double ratio =
        cert.max_singular_value > 0.0 ? cert.min_singular_value / cert.max_singular_value : 0.0;
    if (ratio > 1e-8) {
        cert.verdict = CertificateVerdict::Regular;
    } else if (ratio < 1e-12) {
        cert.verdict = CertificateVerdict::Singular;
    } else {
        cert.verdict = CertificateVerdict::NearSingular;
    }
    return cert;
}

}  // namespace ctrlscore
