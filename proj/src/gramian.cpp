#include "ctrlscore/gramian.hpp"

#include "ctrlscore/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

namespace ctrlscore {

Eigen::MatrixXd enforce_gramian_psd(const Eigen::MatrixXd& W, const std::string& where) {
    Eigen::MatrixXd sym = 0.5 * (W + W.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    if (eig.info() != Eigen::Success) {
        throw NumericalError(where + ": eigendecomposition failed");
    }
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const double scale = std::max(lambda.cwiseAbs().maxCoeff(), 0.0);
    const double floor = -1e-8 * scale;
    if (lambda.minCoeff() < floor) {
        throw NumericalError(where + ": indefinite Gramian, min eigenvalue " +
                             std::to_string(lambda.minCoeff()));
    }
    if (lambda.minCoeff() >= 0.0) {
        return sym;
    }
    Eigen::VectorXd clipped = lambda.cwiseMax(0.0);
    return eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
}

GramianSet gramians_quadrature(const TemporalSystem& sys, const AdjointTrajectory& adjoint,
                               double dt) {
    const int n = sys.dimension();
    const std::vector<double> w = trapezoid_weights(adjoint.times);

    std::vector<Eigen::MatrixXd> acc(n, Eigen::MatrixXd::Zero(n, n));
    for (std::size_t l = 0; l < adjoint.times.size(); ++l) {
        // Column i of Y^T is the transition matrix applied to e_i.
        const Eigen::MatrixXd phi = adjoint.values[l].transpose();
        for (int i = 0; i < n; ++i) {
            acc[i].noalias() += w[l] * (phi.col(i) * phi.col(i).transpose());
        }
    }

    GramianSet gs;
    gs.n = n;
    gs.backend = "quadrature";
    gs.params = "dt=" + std::to_string(dt);
    gs.W.reserve(n);
    for (int i = 0; i < n; ++i) {
        gs.W.push_back(enforce_gramian_psd(acc[i], "quadrature W_" + std::to_string(i + 1)));
    }
    return gs;
}

GramianSet gramians_quadrature(const TemporalSystem& sys, double dt) {
    return gramians_quadrature(sys, propagate_adjoint(sys, dt), dt);
}

namespace {

// Normalized Legendre polynomial values phi_0..phi_J at u in [-1, 1], by the
// three-term recurrence with normalization sqrt((2j+1)/2).
void normalized_legendre(double u, int order, std::vector<double>& out) {
    out.resize(order + 1);
    double prev = 1.0;  // P_0
    out[0] = std::sqrt(0.5);
    if (order == 0) return;
    double curr = u;  // P_1
    out[1] = std::sqrt(1.5) * u;
    for (int j = 2; j <= order; ++j) {
        const double next =
            ((2.0 * j - 1.0) * u * curr - (j - 1.0) * prev) / static_cast<double>(j);
        prev = curr;
        curr = next;
        out[j] = std::sqrt((2.0 * j + 1.0) / 2.0) * curr;
    }
}

}  // namespace

GramianSet gramians_legendre(const TemporalSystem& sys, double dt, int order) {
    if (order < 0) {
        throw ValidationError("Legendre truncation order must be nonnegative");
    }
    const int n = sys.dimension();
    const AdjointTrajectory adjoint = propagate_adjoint(sys, dt);
    const auto& switches = sys.switch_times();

    std::vector<Eigen::MatrixXd> acc(n, Eigen::MatrixXd::Zero(n, n));
    std::vector<double> phi_vals;

    std::size_t lo = 0;  // first grid index of the current segment
    for (std::size_t k = 0; k < sys.segment_count(); ++k) {
        const double len = sys.segments()[k].duration;
        if (len <= 0.0) continue;
        // Grid slice [lo, hi] covers [t_{k-1}, t_k]; substep_count matches
        // the grid builder, so boundaries land exactly.
        const std::size_t hi = lo + substep_count(len, dt);

        std::vector<double> seg_times(adjoint.times.begin() + lo, adjoint.times.begin() + hi + 1);
        const std::vector<double> w = trapezoid_weights(seg_times);

        // coeff[j] holds the matrix whose column i is the j-th Fourier
        // coefficient of y_i on this segment.
        std::vector<Eigen::MatrixXd> coeff(order + 1, Eigen::MatrixXd::Zero(n, n));
        for (std::size_t l = 0; l <= hi - lo; ++l) {
            const double tau = seg_times[l];
            const double u = (2.0 * tau - (switches[k + 1] + switches[k])) / len;
            normalized_legendre(std::min(1.0, std::max(-1.0, u)), order, phi_vals);
            const Eigen::MatrixXd phi = adjoint.values[lo + l].transpose();
            for (int j = 0; j <= order; ++j) {
                coeff[j].noalias() += (w[l] * phi_vals[j]) * phi;
            }
        }
        const double scale = std::sqrt(2.0 / len);
        for (int j = 0; j <= order; ++j) {
            coeff[j] *= scale;
            for (int i = 0; i < n; ++i) {
                acc[i].noalias() += coeff[j].col(i) * coeff[j].col(i).transpose();
            }
        }
        lo = hi;
    }

    GramianSet gs;
    gs.n = n;
    gs.backend = "legendre";
    gs.params = "dt=" + std::to_string(dt) + " order=" + std::to_string(order);
    gs.W.reserve(n);
    for (int i = 0; i < n; ++i) {
        gs.W.push_back(enforce_gramian_psd(acc[i], "legendre W_" + std::to_string(i + 1)));
    }
    return gs;
}

namespace {

void check_eigenvalue_separation(const Eigen::MatrixXd& A, std::size_t segment_index) {
    Eigen::EigenSolver<Eigen::MatrixXd> eig(A, false);
    if (eig.info() != Eigen::Success) {
        throw NumericalError("eigenvalue computation failed on segment " +
                             std::to_string(segment_index + 1));
    }
    const Eigen::VectorXcd lambda = eig.eigenvalues();
    const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
    for (int i = 0; i < lambda.size(); ++i) {
        for (int j = i; j < lambda.size(); ++j) {
            if (std::abs(lambda(i) + lambda(j)) <= 1e-9 * scale) {
                throw ValidationError("Assumption 1 violated at segment " +
                                      std::to_string(segment_index + 1) +
                                      ": A and -A share an eigenvalue");
            }
        }
    }
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) {
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
        }
    }
    return K;
}

}  // namespace

GramianSet gramians_lyapunov(const TemporalSystem& sys) {
    if (!sys.all_constant()) {
        throw ValidationError("Lyapunov backend requires constant segments");
    }
    if (!(sys.final_time() > 0.0)) {
        throw ValidationError("zero horizon: total duration must be positive");
    }
    const int n = sys.dimension();
    const std::size_t m = sys.segment_count();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);

    std::vector<Eigen::MatrixXd> acc(n, Eigen::MatrixXd::Zero(n, n));
    Eigen::MatrixXd chain = id;  // product of exponentials of the later segments

    for (std::size_t k = m; k-- > 0;) {
        const Segment& seg = sys.segments()[k];
        if (seg.duration <= 0.0) continue;
        const Eigen::MatrixXd& A = seg.constant();
        check_eigenvalue_separation(A, k);

        // Vectorized Lyapunov operator A X + X A^T, factored once per segment
        // and reused for all n right-hand sides.
        const Eigen::MatrixXd op = kron(id, A) + kron(A, id);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(op);
        if (!lu.isInvertible()) {
            throw NumericalError("singular Lyapunov operator on segment " + std::to_string(k + 1));
        }
        const Eigen::MatrixXd expA = matrix_exponential(A, seg.duration);

        for (int i = 0; i < n; ++i) {
            Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, n);
            rhs(i, i) = -1.0;
            const Eigen::VectorXd v = expA.col(i);
            rhs.noalias() += v * v.transpose();
            const Eigen::VectorXd sol = lu.solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), n * n));
            const Eigen::Map<const Eigen::MatrixXd> Wk(sol.data(), n, n);
            acc[i].noalias() += chain * Wk * chain.transpose();
        }
        chain = chain * expA;
    }

    GramianSet gs;
    gs.n = n;
    gs.backend = "lyapunov";
    gs.params = "dense";
    gs.W.reserve(n);
    for (int i = 0; i < n; ++i) {
        gs.W.push_back(enforce_gramian_psd(acc[i], "lyapunov W_" + std::to_string(i + 1)));
    }
    return gs;
}

AssembledGramian assemble(const GramianSet& gs, const Eigen::VectorXd& p) {
    if (p.size() != gs.n) {
        throw ValidationError("score vector dimension does not match the Gramian set");
    }
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(gs.n, gs.n);
    for (int i = 0; i < gs.n; ++i) {
        W.noalias() += p(i) * gs.W[i];
    }
    W = 0.5 * (W + W.transpose()).eval();
    return AssembledGramian{std::move(W), p};
}

double min_control_energy(const AssembledGramian& ag, const Eigen::VectorXd& x_f) {
    if (x_f.size() != ag.W.rows()) {
        throw ValidationError("target state dimension does not match the Gramian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ag.W, Eigen::EigenvaluesOnly);
    const double lmax = eig.eigenvalues().maxCoeff();
    if (!(eig.eigenvalues().minCoeff() > 1e-10 * lmax) || !(lmax > 0.0)) {
        throw NumericalError("system not controllable on [0, t_m] with this p");
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(ag.W);
    return x_f.dot(ldlt.solve(x_f));
}

namespace {

constexpr char kBundleMagic[] = "ctrlscore-gramians v1";

}  // namespace

void save_gramians(const GramianSet& gs, std::ostream& out) {
    out << kBundleMagic << "\n";
    out << "n " << gs.n << "\n";
    out << "backend " << (gs.backend.empty() ? "unknown" : gs.backend) << "\n";
    out << "params " << gs.params << "\n";
    out.precision(std::numeric_limits<double>::max_digits10);
    for (int i = 0; i < gs.n; ++i) {
        out << "matrix " << (i + 1) << "\n";
        for (int r = 0; r < gs.n; ++r) {
            for (int c = 0; c < gs.n; ++c) {
                out << gs.W[i](r, c) << (c + 1 < gs.n ? " " : "\n");
            }
        }
    }
}

void save_gramians(const GramianSet& gs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    save_gramians(gs, out);
    if (!out) throw ValidationError("failed writing '" + path + "'");
}

GramianSet load_gramians(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kBundleMagic) {
        throw ValidationError("not a Gramian bundle (bad header)");
    }
    GramianSet gs;
    std::string key;
    if (!(in >> key >> gs.n) || key != "n" || gs.n < 1) {
        throw ValidationError("Gramian bundle: bad dimension line");
    }
    if (!(in >> key >> gs.backend) || key != "backend") {
        throw ValidationError("Gramian bundle: bad backend line");
    }
    in >> key;
    if (key != "params") throw ValidationError("Gramian bundle: bad params line");
    std::getline(in, gs.params);
    if (!gs.params.empty() && gs.params.front() == ' ') gs.params.erase(0, 1);

    gs.W.assign(gs.n, Eigen::MatrixXd(gs.n, gs.n));
    for (int i = 0; i < gs.n; ++i) {
        int index = 0;
        if (!(in >> key >> index) || key != "matrix" || index != i + 1) {
            throw ValidationError("Gramian bundle: expected matrix " + std::to_string(i + 1));
        }
        for (int r = 0; r < gs.n; ++r) {
            for (int c = 0; c < gs.n; ++c) {
                if (!(in >> gs.W[i](r, c))) {
                    throw ValidationError("Gramian bundle: truncated matrix " +
                                          std::to_string(i + 1));
                }
            }
        }
    }
    return gs;
}

GramianSet load_gramians(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    return load_gramians(in);
}

}  // namespace ctrlscore
