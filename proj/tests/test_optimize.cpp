#include "ctrlscore/optimize.hpp"

#include "ctrlscore/errors.hpp"
#include "ctrlscore/networks.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace ctrlscore;

namespace {

/// Brute-force simplex projection: tries every support set through the KKT
/// stationarity condition and returns the feasible candidate.
Eigen::VectorXd project_simplex_enumerated(const Eigen::VectorXd& v) {
    const int n = static_cast<int>(v.size());
    Eigen::VectorXd best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        double sum = 0.0;
        int size = 0;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                sum += v(i);
                ++size;
            }
        }
        const double shift = (1.0 - sum) / size;
        Eigen::VectorXd candidate = Eigen::VectorXd::Zero(n);
        bool feasible = true;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                candidate(i) = v(i) + shift;
                feasible = feasible && candidate(i) >= -1e-12;
            } else {
                feasible = feasible && v(i) + shift <= 1e-12;
            }
        }
        if (!feasible) continue;
        const double dist = (candidate - v).squaredNorm();
        if (dist < best_dist) {
            best_dist = dist;
            best = candidate;
        }
    }
    return best;
}

GramianSet diagonal_gramians(const Eigen::VectorXd& scales) {
    GramianSet gs;
    gs.n = static_cast<int>(scales.size());
    gs.backend = "synthetic";
    for (int i = 0; i < gs.n; ++i) {
        Eigen::MatrixXd W = Eigen::MatrixXd::Zero(gs.n, gs.n);
        W(i, i) = scales(i);
        gs.W.push_back(W);
    }
    return gs;
}

GramianSet random_spd_gramians(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    GramianSet gs;
    gs.n = n;
    gs.backend = "synthetic";
    for (int i = 0; i < n; ++i) {
        Eigen::MatrixXd M(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) M(r, c) = entry(rng);
        gs.W.push_back(Eigen::MatrixXd(M * M.transpose() +
                                       0.4 * Eigen::MatrixXd::Identity(n, n)));
    }
    return gs;
}

}  // namespace

TEST_SUITE_BEGIN("optimize");

TEST_CASE("project_simplex fixed points and symmetry") {
    Eigen::VectorXd on(3);
    on << 0.2, 0.5, 0.3;
    CHECK((project_simplex(on) - on).cwiseAbs().maxCoeff() < 1e-15);

    Eigen::VectorXd vertex(3);
    vertex << 2.0, 0.0, 0.0;
    Eigen::VectorXd e1(3);
    e1 << 1.0, 0.0, 0.0;
    CHECK((project_simplex(vertex) - e1).cwiseAbs().maxCoeff() < 1e-15);

    Eigen::VectorXd symmetric = Eigen::VectorXd::Constant(3, 0.5);
    CHECK((project_simplex(symmetric) - Eigen::VectorXd::Constant(3, 1.0 / 3))
              .cwiseAbs()
              .maxCoeff() < 1e-15);
}

TEST_CASE("project_simplex matches the KKT enumeration oracle") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> gauss(0.0, 2.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = gauss(rng);
        if (trial % 3 == 0 && n > 1) v(0) = v(1);  // exercise ties
        const Eigen::VectorXd fast = project_simplex(v);
        const Eigen::VectorXd slow = project_simplex_enumerated(v);
        REQUIRE(slow.size() == n);
        CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(fast.minCoeff() >= 0.0);
        CHECK(fast.sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("project_simplex is idempotent and nonexpansive") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> gauss(0.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXd u(6), v(6);
        for (int i = 0; i < 6; ++i) {
            u(i) = gauss(rng);
            v(i) = gauss(rng);
        }
        const Eigen::VectorXd pu = project_simplex(u);
        const Eigen::VectorXd pv = project_simplex(v);
        CHECK((project_simplex(pu) - pu).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((pu - pv).norm() <= (u - v).norm() + 1e-14);
    }
}

TEST_CASE("objective closed forms") {
    GramianSet gs = diagonal_gramians(Eigen::VectorXd::Constant(2, 4.0));
    // W(p) = diag(4 p), so the uniform point gives diag(2, 2).
    const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(2, 0.5);
    Objective vol(ScoreKind::Volumetric, gs);
    Objective energy(ScoreKind::AverageEnergy, gs);
    CHECK(vol.value(uniform) == doctest::Approx(-2.0 * std::log(2.0)));
    CHECK(energy.value(uniform) == doctest::Approx(1.0));

    GramianSet unit = diagonal_gramians(Eigen::VectorXd::Constant(3, 3.0));
    const Eigen::VectorXd third = Eigen::VectorXd::Constant(3, 1.0 / 3);
    CHECK(Objective(ScoreKind::Volumetric, unit).value(third) == doctest::Approx(0.0));
    CHECK(Objective(ScoreKind::AverageEnergy, unit).value(third) == doctest::Approx(3.0));

    // Vertices of a diagonal family are infeasible.
    Eigen::VectorXd vertex = Eigen::VectorXd::Zero(3);
    vertex(0) = 1.0;
    CHECK(std::isinf(Objective(ScoreKind::Volumetric, unit).value(vertex)));
}

TEST_CASE("diagonal gradient closed form") {
    GramianSet gs = diagonal_gramians(Eigen::VectorXd::Ones(3));
    Eigen::VectorXd p(3);
    p << 0.5, 0.3, 0.2;
    const Eigen::VectorXd grad = Objective(ScoreKind::Volumetric, gs).gradient(p);
    for (int i = 0; i < 3; ++i) {
        CHECK(grad(i) == doctest::Approx(-1.0 / p(i)).epsilon(1e-12));
    }
}

TEST_CASE("gradients match central finite differences") {
    std::mt19937_64 rng(31337);
    const double h = 1e-6;
    for (int system = 0; system < 3; ++system) {
        GramianSet gs = random_spd_gramians(rng, 5);
        for (ScoreKind kind : {ScoreKind::Volumetric, ScoreKind::AverageEnergy}) {
            Objective obj(kind, gs);
            for (int point = 0; point < 5; ++point) {
                const Eigen::VectorXd p = testing::random_interior_simplex(rng, 5, 1e-2);
                const Eigen::VectorXd grad = obj.gradient(p);
                for (int i = 0; i < 5; ++i) {
                    Eigen::VectorXd up = p, down = p;
                    up(i) += h;
                    down(i) -= h;
                    const double fd = (obj.value(up) - obj.value(down)) / (2.0 * h);
                    CHECK(grad(i) == doctest::Approx(fd).epsilon(1e-5));
                }
            }
        }
    }
}

TEST_CASE("gradient of the volumetric objective points at the hub node") {
    const auto gs = gramians_quadrature(builtin_system("net1"), 1e-2);
    Objective obj(ScoreKind::Volumetric, gs);
    const Eigen::VectorXd grad = obj.gradient(Eigen::VectorXd::Constant(10, 0.1));
    int most_negative = 0;
    grad.minCoeff(&most_negative);
    CHECK(most_negative == 6);  // node 7
}

TEST_CASE("armijo accepts immediately at stationarity and decreases otherwise") {
    GramianSet gs = diagonal_gramians(Eigen::VectorXd::Ones(2));
    Objective obj(ScoreKind::Volumetric, gs);
    SolverOptions opts;

    // Uniform is optimal for this symmetric family: zero projected step.
    const Eigen::VectorXd star = Eigen::VectorXd::Constant(2, 0.5);
    CHECK(armijo_step(obj, star, obj.gradient(star), opts) == doctest::Approx(opts.alpha0));

    const Eigen::VectorXd zero_grad = Eigen::VectorXd::Zero(2);
    CHECK(armijo_step(obj, star, zero_grad, opts) == doctest::Approx(opts.alpha0));

    Eigen::VectorXd p(2);
    p << 0.9, 0.1;
    const Eigen::VectorXd grad = obj.gradient(p);
    const double alpha = armijo_step(obj, p, grad, opts);
    const Eigen::VectorXd trial = project_simplex(p - alpha * grad);
    CHECK(obj.value(trial) <=
          obj.value(p) + opts.sigma * grad.dot(trial - p) + 1e-14);
    CHECK(obj.value(trial) <= obj.value(p));

    SolverOptions strict = opts;
    strict.sigma = 2.0;
    CHECK_THROWS_AS(armijo_step(obj, p, grad, strict), ValidationError);
}

TEST_CASE("solve handles the one-node system without iterating") {
    GramianSet gs = diagonal_gramians(Eigen::VectorXd::Constant(1, 2.0));
    const auto report = solve(Objective(ScoreKind::Volumetric, gs));
    CHECK(report.iterations == 0);
    CHECK(report.converged);
    CHECK(report.p_star.p(0) == doctest::Approx(1.0));
}

TEST_CASE("solve finds the analytic optimum of a diagonal family") {
    // For W(p) = diag(p_i s_i) the volumetric score is uniform regardless of
    // the scales, since -sum log(p_i s_i) separates.
    Eigen::VectorXd scales(3);
    scales << 1.0, 4.0, 9.0;
    const auto report = solve(Objective(ScoreKind::Volumetric, diagonal_gramians(scales)));
    CHECK(report.converged);
    CHECK((report.p_star.p - Eigen::VectorXd::Constant(3, 1.0 / 3)).cwiseAbs().maxCoeff() < 1e-6);

    // The average-energy score balances 1/(p_i s_i): p_i proportional to
    // 1/sqrt(s_i).
    const auto energy = solve(Objective(ScoreKind::AverageEnergy, diagonal_gramians(scales)));
    Eigen::VectorXd expected(3);
    expected << 1.0, 0.5, 1.0 / 3.0;
    expected /= expected.sum();
    CHECK(energy.converged);
    CHECK((energy.p_star.p - expected).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("solve reports monotone descent and feasible iterates") {
    std::mt19937_64 rng(4242);
    GramianSet gs = random_spd_gramians(rng, 6);
    SolverOptions opts;
    opts.record_history = true;
    const auto report = solve(Objective(ScoreKind::AverageEnergy, gs), opts);
    CHECK(report.converged);
    REQUIRE(report.objective_history.size() >= 2);
    for (std::size_t k = 1; k < report.objective_history.size(); ++k) {
        CHECK(report.objective_history[k] <= report.objective_history[k - 1] + 1e-12);
        CHECK(std::isfinite(report.objective_history[k]));
    }
    CHECK(report.terminal_gap <= opts.eps);
    report.p_star.validate();
}

TEST_CASE("solve is insensitive to the starting point on regular problems") {
    std::mt19937_64 rng(555);
    GramianSet gs = random_spd_gramians(rng, 5);
    Objective obj(ScoreKind::Volumetric, gs);
    const auto baseline = solve(obj);
    for (int restart = 0; restart < 5; ++restart) {
        SolverOptions opts;
        opts.initial_point = testing::random_interior_simplex(rng, 5);
        const auto report = solve(obj, opts);
        CHECK((report.p_star.p - baseline.p_star.p).cwiseAbs().maxCoeff() < 1e-4);
    }
}

TEST_CASE("objectives are convex along random chords") {
    std::mt19937_64 rng(808);
    GramianSet gs = random_spd_gramians(rng, 5);
    for (ScoreKind kind : {ScoreKind::Volumetric, ScoreKind::AverageEnergy}) {
        Objective obj(kind, gs);
        for (int trial = 0; trial < 50; ++trial) {
            const Eigen::VectorXd p = testing::random_interior_simplex(rng, 5);
            const Eigen::VectorXd q = testing::random_interior_simplex(rng, 5);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            const double lambda = unit(rng);
            const double mix = obj.value(lambda * p + (1.0 - lambda) * q);
            CHECK(mix <= lambda * obj.value(p) + (1.0 - lambda) * obj.value(q) + 1e-9);
        }
    }
}

TEST_CASE("volumetric scores of symmetric LTI systems are uniform") {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        Eigen::MatrixXd M(5, 5);
        for (int r = 0; r < 5; ++r)
            for (int c = 0; c < 5; ++c) M(r, c) = entry(rng);
        Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
        TemporalSystem sys(5, {Segment{ConstantMatrix{sym}, 1.0}});
        const auto gs = gramians_quadrature(sys, 1e-3);
        const auto report = solve(Objective(ScoreKind::Volumetric, gs));
        CHECK((report.p_star.p - Eigen::VectorXd::Constant(5, 0.2)).cwiseAbs().maxCoeff() < 1e-4);
    }
}

TEST_CASE("small duration perturbations move the scores only slightly") {
    // Networks 1 and 3 differ by a small change of the snapshot durations;
    // network 4 by a large one.
    const auto score = [](const char* id) {
        const auto gs = gramians_quadrature(builtin_system(id), 1e-2);
        return solve(Objective(ScoreKind::Volumetric, gs)).p_star.p;
    };
    const Eigen::VectorXd base = score("net1");
    const Eigen::VectorXd near = score("net3");
    const Eigen::VectorXd far = score("net4");
    CHECK((base - near).cwiseAbs().maxCoeff() < 0.02);
    CHECK((base - near).cwiseAbs().maxCoeff() < (base - far).cwiseAbs().maxCoeff());
}

TEST_CASE("infeasible uniform start is reported") {
    GramianSet gs;
    gs.n = 2;
    gs.backend = "synthetic";
    Eigen::MatrixXd W1 = Eigen::MatrixXd::Zero(2, 2);
    W1(0, 0) = 1.0;
    gs.W = {W1, W1};  // both Gramians share a null direction
    CHECK_THROWS_WITH_AS(solve(Objective(ScoreKind::Volumetric, gs)),
                         doctest::Contains("uniform"), NumericalError);
}

TEST_CASE("certificate of idle dynamics is a scaled identity") {
    const double T = 1.7;
    TemporalSystem sys(3, {Segment{ConstantMatrix{Eigen::MatrixXd::Zero(3, 3)}, T}});
    const auto cert = uniqueness_certificate(sys, 1e-3);
    CHECK((cert.R - T * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(cert.verdict == CertificateVerdict::Regular);
    CHECK(cert.min_singular_value == doctest::Approx(T));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(cert.R(i, j) >= 0.0);
}

TEST_CASE("certificate approaches dt times identity for short horizons") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    Eigen::MatrixXd A(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) A(r, c) = entry(rng);
    const double horizon = 1e-3;
    TemporalSystem sys(4, {Segment{ConstantMatrix{A}, horizon}});
    const auto cert = uniqueness_certificate(sys, 1e-4);
    CHECK((cert.R / horizon - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-2);
}

TEST_CASE("certificate is regular on the bundled networks") {
    for (const char* id : {"net1", "net2", "net7"}) {
        const auto cert = uniqueness_certificate(builtin_system(id), 1e-2);
        CHECK(cert.verdict == CertificateVerdict::Regular);
        CHECK(cert.det_R != 0.0);
    }
}

TEST_CASE("score vector validation") {
    CHECK_THROWS_AS(ScoreVector{Eigen::VectorXd()}.validate(), ValidationError);
    Eigen::VectorXd bad(2);
    bad << 0.8, 0.1;
    CHECK_THROWS_AS(ScoreVector{bad}.validate(), ValidationError);
    ScoreVector::uniform(4).validate();
    CHECK(to_string(ScoreKind::Volumetric) == "vcs");
    CHECK(score_kind_from_string("aecs") == ScoreKind::AverageEnergy);
    CHECK_THROWS_AS(score_kind_from_string("bogus"), ValidationError);
}

TEST_SUITE_END();
