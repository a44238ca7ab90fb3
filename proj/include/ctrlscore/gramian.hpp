#pragma once

#include "ctrlscore/system.hpp"
#include "ctrlscore/transition.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace ctrlscore {

/// The n per-node controllability Gramians of a system on [0, t_m]. Each
/// matrix is symmetric positive semidefinite (symmetrized on construction,
/// eigenvalues above -1e-8 * scale clipped to zero, anything worse is an
/// error). Immutable once built.
struct GramianSet {
    int n = 0;
    std::vector<Eigen::MatrixXd> W;
    std::string backend;  // "quadrature" | "legendre" | "lyapunov" | "datadriven"
    std::string params;   // human-readable backend parameters
};

/// Symmetrize and PSD-clip a computed Gramian; throws NumericalError when the
/// most negative eigenvalue is beyond tolerance.
Eigen::MatrixXd enforce_gramian_psd(const Eigen::MatrixXd& W, const std::string& where);

/// Trapezoidal quadrature of the Gramian integrals along the adjoint
/// trajectory sampled at step dt.
GramianSet gramians_quadrature(const TemporalSystem& sys, double dt);

/// Same, shared adjoint trajectory supplied by the caller.
GramianSet gramians_quadrature(const TemporalSystem& sys, const AdjointTrajectory& adjoint,
                               double dt);

/// Legendre series approximation: per segment, the integrand is expanded in
/// normalized Legendre polynomials up to the given truncation order; the
/// coefficient integrals use the trapezoidal rule at step dt.
GramianSet gramians_legendre(const TemporalSystem& sys, double dt, int order);

/// Exact computation for switched systems through per-segment Lyapunov
/// equations. Requires every segment constant and, per segment, that A and -A
/// share no eigenvalue.
GramianSet gramians_lyapunov(const TemporalSystem& sys);

/// W(p) = sum_i p_i W_i, symmetrized.
struct AssembledGramian {
    Eigen::MatrixXd W;
    Eigen::VectorXd p;
};

AssembledGramian assemble(const GramianSet& gs, const Eigen::VectorXd& p);

/// Minimum input energy x_f^T W(p)^{-1} x_f, via a symmetric factorization.
/// Throws NumericalError when W(p) is singular at the tolerance
/// lambda_min > 1e-10 * lambda_max.
double min_control_energy(const AssembledGramian& ag, const Eigen::VectorXd& x_f);

/// Text bundle: dimension, backend tag, n matrices row-major, doubles written
/// exactly so that a round trip is bit-identical.
void save_gramians(const GramianSet& gs, std::ostream& out);
void save_gramians(const GramianSet& gs, const std::string& path);
GramianSet load_gramians(std::istream& in);
GramianSet load_gramians(const std::string& path);

}  // namespace ctrlscore
