#include "ctrlscore/centrality.hpp"
#include "ctrlscore/datadriven.hpp"
#include "ctrlscore/errors.hpp"
#include "ctrlscore/gramian.hpp"
#include "ctrlscore/networks.hpp"
#include "ctrlscore/optimize.hpp"
#include "ctrlscore/reference.hpp"
#include "ctrlscore/system.hpp"
#include "ctrlscore/transition.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace ctrlscore;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Options {
    std::string network;
    std::string kind = "vcs";
    std::string backend = "quadrature";
    double dt = 1e-3;
    int legendre_order = 20;
    double eps = 1e-7;
    double sigma = 1e-4;
    double rho = 0.5;
    double alpha0 = 1.0;
    int max_iters = 50000;
    std::uint64_t seed = 1;
    std::string output = "table";
    std::string gramian_file;
    std::string trajectories;
    int count = 0;  // trajectories to synthesize; 0 means n + 2
    bool allow_rank_deficient = false;
    std::string out;
    std::string out_dir = ".";
    std::string gcs;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

TemporalSystem load_system(const std::string& network) {
    if (network.empty()) {
        throw ValidationError("no network given (use --network <path|id>)");
    }
    if (is_builtin_network(network)) {
        return builtin_system(network);
    }
    return build_system(parse_network(read_file(network)));
}

SolverOptions solver_options(const Options& o) {
    SolverOptions opts;
    opts.eps = o.eps;
    opts.sigma = o.sigma;
    opts.rho = o.rho;
    opts.alpha0 = o.alpha0;
    opts.max_iters = o.max_iters;
    return opts;
}

GramianSet model_gramians(const Options& o, const TemporalSystem& sys) {
    if (o.backend == "quadrature") return gramians_quadrature(sys, o.dt);
    if (o.backend == "legendre") return gramians_legendre(sys, o.dt, o.legendre_order);
    if (o.backend == "lyapunov") return gramians_lyapunov(sys);
    if (o.backend == "datadriven") {
        const int count = o.count > 0 ? o.count : sys.dimension() + 2;
        const TrajectoryBundle bundle = generate_trajectories(sys, count, o.dt, o.seed);
        DataDrivenOptions dd;
        dd.allow_rank_deficient = o.allow_rank_deficient;
        return gramians_datadriven(bundle, dd);
    }
    throw ValidationError("unknown backend '" + o.backend + "'");
}

/// Resolves the configured Gramian source: precomputed bundle, trajectory
/// file, or a model-based/datadriven computation from the network.
GramianSet resolve_gramians(const Options& o) {
    const int sources = (!o.network.empty() ? 1 : 0) + (!o.gramian_file.empty() ? 1 : 0) +
                        (!o.trajectories.empty() ? 1 : 0);
    if (sources != 1) {
        throw ValidationError("exactly one of --network, --gramian-file, --trajectories required");
    }
    if (!o.gramian_file.empty()) {
        return load_gramians(o.gramian_file);
    }
    if (!o.trajectories.empty()) {
        DataDrivenOptions dd;
        dd.allow_rank_deficient = o.allow_rank_deficient;
        return gramians_datadriven(load_trajectories(o.trajectories), dd);
    }
    return model_gramians(o, load_system(o.network));
}

std::string fixed3(double value) {
    std::ostringstream out;
    if (std::abs(value) < 5e-4) value = 0.0;  // avoid "-0.000"
    out << std::fixed << std::setprecision(3) << value;
    return out.str();
}

std::string full(double value) {
    std::ostringstream out;
    out << std::setprecision(17) << value;
    return out.str();
}

void print_score_report(const Options& o, const GramianSet& gs, const SolveReport& report) {
    if (o.output == "records") {
        for (int i = 0; i < gs.n; ++i) {
            std::cout << "record=score kind=" << o.kind << " node=" << (i + 1)
                      << " value=" << full(report.p_star.p(i)) << "\n";
        }
        std::cout << "record=solve kind=" << o.kind << " backend=" << gs.backend
                  << " objective=" << full(report.objective_value)
                  << " iterations=" << report.iterations
                  << " converged=" << (report.converged ? 1 : 0)
                  << " terminal_gap=" << full(report.terminal_gap) << "\n";
        return;
    }
    std::cout << "node  " << o.kind << "\n";
    for (int i = 0; i < gs.n; ++i) {
        std::cout << std::setw(4) << (i + 1) << "  " << fixed3(report.p_star.p(i)) << "\n";
    }
    std::cout << "backend " << gs.backend << ", objective " << full(report.objective_value)
              << ", " << report.iterations << " iterations, "
              << (report.converged ? "converged" : "iteration budget exhausted") << "\n";
}

int cmd_score(const Options& o) {
    const GramianSet gs = resolve_gramians(o);
    const Objective obj(score_kind_from_string(o.kind), gs);
    const SolveReport report = solve(obj, solver_options(o));
    print_score_report(o, gs, report);
    return kExitOk;
}

int cmd_gramian(const Options& o) {
    if (o.out.empty()) throw ValidationError("--out <path> is required");
    const GramianSet gs = resolve_gramians(o);
    save_gramians(gs, o.out);
    std::cout << "wrote " << gs.n << " Gramians (backend " << gs.backend << ") to " << o.out
              << "\n";
    return kExitOk;
}

int cmd_certify(const Options& o) {
    const TemporalSystem sys = load_system(o.network);
    const Certificate cert = uniqueness_certificate(sys, o.dt);
    if (o.output == "records") {
        std::cout << "record=certificate det=" << full(cert.det_R)
                  << " sigma_min=" << full(cert.min_singular_value)
                  << " sigma_max=" << full(cert.max_singular_value)
                  << " verdict=" << to_string(cert.verdict) << "\n";
    } else {
        std::cout << "det R        " << full(cert.det_R) << "\n"
                  << "sigma_min    " << full(cert.min_singular_value) << "\n"
                  << "sigma_max    " << full(cert.max_singular_value) << "\n"
                  << "verdict      " << to_string(cert.verdict) << "\n";
    }
    return cert.verdict == CertificateVerdict::Singular ? kExitNumerical : kExitOk;
}

int cmd_centrality(const Options& o) {
    if (!o.gcs.empty()) {
        const TemporalSystem sys = load_system(o.network);
        const auto scores =
            generalized_scores(sys, score_kind_from_string(o.gcs), solver_options(o), o.dt);
        if (o.output == "records") {
            for (std::size_t k = 0; k < scores.size(); ++k) {
                for (int i = 0; i < sys.dimension(); ++i) {
                    std::cout << "record=gcs kind=" << o.gcs << " snapshot=" << (k + 1)
                              << " node=" << (i + 1) << " value=" << full(scores[k].p(i)) << "\n";
                }
            }
        } else {
            std::cout << "node";
            for (std::size_t k = 0; k < scores.size(); ++k) {
                std::cout << "  snap" << (k + 1);
            }
            std::cout << "\n";
            for (int i = 0; i < sys.dimension(); ++i) {
                std::cout << std::setw(4) << (i + 1);
                for (const auto& score : scores) std::cout << "  " << fixed3(score.p(i));
                std::cout << "\n";
            }
        }
        return kExitOk;
    }

    const GramianSet gs = resolve_gramians(o);
    const EnergyCentralities tables = control_energy_centralities(gs);
    if (o.output == "records") {
        for (int i = 0; i < gs.n; ++i) {
            std::cout << "record=centrality node=" << (i + 1)
                      << " vce=" << full(tables.vce.values(i))
                      << " ace=" << full(tables.ace.values(i))
                      << " ac=" << full(tables.ac.values(i)) << "\n";
        }
    } else {
        std::cout << "node      vce       ace        ac\n";
        for (int i = 0; i < gs.n; ++i) {
            std::cout << std::setw(4) << (i + 1) << "  " << std::setw(8)
                      << fixed3(tables.vce.values(i)) << "  " << std::setw(8)
                      << fixed3(tables.ace.values(i)) << "  " << std::setw(8)
                      << fixed3(tables.ac.values(i)) << "\n";
        }
    }
    return kExitOk;
}

int cmd_generate(const Options& o) {
    if (o.out.empty()) throw ValidationError("--out <path> is required");
    const TemporalSystem sys = load_system(o.network);
    const int count = o.count > 0 ? o.count : sys.dimension() + 2;
    const TrajectoryBundle bundle = generate_trajectories(sys, count, o.dt, o.seed);
    save_trajectories(bundle, o.out);
    std::cout << "wrote " << bundle.count << " trajectories over " << bundle.times.size()
              << " samples to " << o.out << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// reproduce: recompute the bundled reference tables and compare cell by cell.
// ---------------------------------------------------------------------------

constexpr double kScoreTol = 0.005;
constexpr double kEnergyTol = 0.01;

std::string scientific2(double value) {
    std::ostringstream out;
    out << std::scientific << std::setprecision(2) << value;
    return out.str();
}

struct Comparison {
    std::ostringstream text;
    double worst_score = 0.0;
    double worst_energy = 0.0;
    int cells = 0;
    int mismatches = 0;
    bool ok = true;

    void cell(const std::string& label, double got, double expected, double tol, bool energy) {
        const double delta = std::abs(got - expected);
        double& worst = energy ? worst_energy : worst_score;
        worst = std::max(worst, delta);
        ++cells;
        if (delta > tol) {
            ok = false;
            ++mismatches;
        }
        text << label << "  computed " << fixed3(got) << "  reference " << fixed3(expected)
             << "  |delta| " << scientific2(delta) << (delta > tol ? "  MISMATCH" : "") << "\n";
    }

    std::string summary(const std::string& what) const {
        if (ok) return what + ": all " + std::to_string(cells) + " cells within tolerance";
        return what + ": " + std::to_string(mismatches) + " of " + std::to_string(cells) +
               " cells beyond tolerance";
    }
};

Eigen::VectorXd score_column(const GramianSet& gs, ScoreKind kind, const SolverOptions& opts) {
    return solve(Objective(kind, gs), opts).p_star.p;
}

void write_artifact(const Options& o, const std::string& name, const std::string& body) {
    const std::filesystem::path path = std::filesystem::path(o.out_dir) / name;
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
    out << body;
    std::cout << "wrote " << path.string() << "\n";
}

int reproduce_table2(const Options& o) {
    const SolverOptions opts = solver_options(o);
    Comparison cmp;
    for (const auto& [id, table] :
         {std::pair{"net1", &reference::kNet1Centralities},
          std::pair{"agg1", &reference::kAgg1Centralities}}) {
        const GramianSet gs = gramians_quadrature(builtin_system(id), o.dt);
        const Eigen::VectorXd vcs = score_column(gs, ScoreKind::Volumetric, opts);
        const Eigen::VectorXd aecs = score_column(gs, ScoreKind::AverageEnergy, opts);
        const EnergyCentralities cent = control_energy_centralities(gs);
        cmp.text << "== " << id << " ==\n";
        for (int i = 0; i < 10; ++i) {
            const auto& row = (*table)[i];
            const std::string node = (i + 1 < 10 ? " " : "") + std::to_string(i + 1);
            cmp.cell(id + std::string(" node ") + node + " vcs ", vcs(i), row.vcs, kScoreTol,
                     false);
            cmp.cell(id + std::string(" node ") + node + " aecs", aecs(i), row.aecs, kScoreTol,
                     false);
            cmp.cell(id + std::string(" node ") + node + " vce ", cent.vce.values(i), row.vce,
                     kEnergyTol, true);
            cmp.cell(id + std::string(" node ") + node + " ace ", cent.ace.values(i), row.ace,
                     kEnergyTol, true);
            cmp.cell(id + std::string(" node ") + node + " ac  ", cent.ac.values(i), row.ac,
                     kEnergyTol, true);
        }
    }
    cmp.text << "worst score delta " << scientific2(cmp.worst_score) << ", worst energy delta "
             << scientific2(cmp.worst_energy) << "\n";
    write_artifact(o, "reproduce_table2.txt", cmp.text.str());
    std::cout << cmp.summary("table II") << "\n";
    return cmp.ok ? kExitOk : kExitNumerical;
}

int reproduce_table3(const Options& o) {
    const SolverOptions opts = solver_options(o);
    Comparison cmp;

    const GramianSet temporal = gramians_quadrature(builtin_system("net2"), o.dt);
    const Eigen::VectorXd vcs_temp = score_column(temporal, ScoreKind::Volumetric, opts);
    const Eigen::VectorXd aecs_temp = score_column(temporal, ScoreKind::AverageEnergy, opts);

    const GramianSet agg = gramians_quadrature(builtin_system("agg2"), o.dt);
    const Eigen::VectorXd vcs_agg = score_column(agg, ScoreKind::Volumetric, opts);
    const Eigen::VectorXd aecs_agg = score_column(agg, ScoreKind::AverageEnergy, opts);

    const TemporalSystem sys = builtin_system("net2");
    const auto gvcs = generalized_scores(sys, ScoreKind::Volumetric, opts, o.dt);
    const auto gaecs = generalized_scores(sys, ScoreKind::AverageEnergy, opts, o.dt);

    for (int i = 0; i < 10; ++i) {
        const std::string node = "node " + std::to_string(i + 1);
        cmp.cell(node + " vcs temporal   ", vcs_temp(i), reference::kNet2VcsTemporal[i], kScoreTol,
                 false);
        for (std::size_t k = 0; k < 4; ++k) {
            cmp.cell(node + " gvcs snapshot " + std::to_string(k + 1), gvcs[k].p(i), 0.100,
                     kScoreTol, false);
        }
        cmp.cell(node + " vcs aggregated ", vcs_agg(i), 0.100, kScoreTol, false);

        const auto& row = reference::kNet2AecsColumns[i];
        cmp.cell(node + " aecs temporal  ", aecs_temp(i), row[0], kScoreTol, false);
        for (std::size_t k = 0; k < 4; ++k) {
            cmp.cell(node + " gaecs snapshot " + std::to_string(k + 1), gaecs[k].p(i), row[1 + k],
                     kScoreTol, false);
        }
        cmp.cell(node + " aecs aggregated", aecs_agg(i), row[5], kScoreTol, false);
    }
    cmp.text << "worst score delta " << scientific2(cmp.worst_score) << "\n";
    write_artifact(o, "reproduce_table3.txt", cmp.text.str());
    std::cout << cmp.summary("table III") << "\n";
    return cmp.ok ? kExitOk : kExitNumerical;
}

int reproduce_table4(const Options& o) {
    const SolverOptions opts = solver_options(o);
    Comparison cmp;
    std::vector<Eigen::VectorXd> vcs_cols, aecs_cols;
    for (const char* id : reference::kNetworkColumnIds) {
        const GramianSet gs = gramians_quadrature(builtin_system(id), o.dt);
        vcs_cols.push_back(score_column(gs, ScoreKind::Volumetric, opts));
        aecs_cols.push_back(score_column(gs, ScoreKind::AverageEnergy, opts));
    }
    for (std::size_t col = 0; col < vcs_cols.size(); ++col) {
        const std::string id = reference::kNetworkColumnIds[col];
        for (int i = 0; i < 10; ++i) {
            const std::string node = " node " + std::to_string(i + 1);
            cmp.cell(id + node + " vcs ", vcs_cols[col](i), reference::kVcsByNetwork[i][col],
                     kScoreTol, false);
            cmp.cell(id + node + " aecs", aecs_cols[col](i), reference::kAecsByNetwork[i][col],
                     kScoreTol, false);
        }
    }

    // Continuity probe: small duration perturbations move the scores less
    // than large ones.
    const auto linf = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return (a - b).cwiseAbs().maxCoeff();
    };
    const double d13 = linf(vcs_cols[0], vcs_cols[1]);
    const double d14 = linf(vcs_cols[0], vcs_cols[2]);
    const double d56 = linf(vcs_cols[3], vcs_cols[4]);
    const double d57 = linf(vcs_cols[3], vcs_cols[5]);
    cmp.text << "vcs distance net1-net3 " << d13 << " vs net1-net4 " << d14 << "\n";
    cmp.text << "vcs distance net5-net6 " << d56 << " vs net5-net7 " << d57 << "\n";
    if (!(d13 < d14) || !(d56 < d57)) cmp.ok = false;

    cmp.text << "worst score delta " << scientific2(cmp.worst_score) << "\n";
    write_artifact(o, "reproduce_table4.txt", cmp.text.str());
    std::cout << cmp.summary("table IV") << "\n";
    return cmp.ok ? kExitOk : kExitNumerical;
}

double max_relative_error(const GramianSet& estimate, const GramianSet& model) {
    double worst = 0.0;
    for (int i = 0; i < model.n; ++i) {
        worst = std::max(worst, (estimate.W[i] - model.W[i]).norm() / model.W[i].norm());
    }
    return worst;
}

int reproduce_fig5(const Options& o) {
    const TemporalSystem sys = builtin_system("net1");
    const GramianSet model = gramians_quadrature(sys, o.dt);
    DataDrivenOptions dd;
    dd.allow_rank_deficient = true;  // the undersampled cases are the point

    std::ostringstream csv;
    csv << "N,trial,max_relative_error\n";
    csv << std::setprecision(17);
    bool ok = true;
    std::cout << "100 trials per sample count on a 10-node network\n";
    for (int count = 7; count <= 12; ++count) {
        std::vector<double> errors;
        for (int trial = 0; trial < 100; ++trial) {
            const std::uint64_t seed = o.seed + 1000 * count + trial;
            const TrajectoryBundle bundle = generate_trajectories(sys, count, o.dt, seed);
            errors.push_back(max_relative_error(gramians_datadriven(bundle, dd), model));
            csv << count << "," << trial << "," << errors.back() << "\n";
        }
        std::vector<double> sorted = errors;
        std::sort(sorted.begin(), sorted.end());
        const double median = 0.5 * (sorted[49] + sorted[50]);
        const bool spanning = count >= 10;
        const bool within = spanning ? median < 1e-2 : median > 1e-1;
        ok = ok && within;
        std::cout << "N=" << count << " median max-relative-error " << std::scientific
                  << std::setprecision(3) << median << (within ? "" : "  UNEXPECTED")
                  << std::defaultfloat << "\n";
    }
    write_artifact(o, "fig5_errors.csv", csv.str());
    std::cout << (ok ? "fig5 reproduction OK" : "fig5 reproduction FAILED") << "\n";
    return ok ? kExitOk : kExitNumerical;
}

int cmd_reproduce(const Options& o, const std::string& target) {
    if (target == "II") return reproduce_table2(o);
    if (target == "III") return reproduce_table3(o);
    if (target == "IV") return reproduce_table4(o);
    if (target == "fig5") return reproduce_fig5(o);
    throw ValidationError("unknown reproduce target '" + target + "'");
}

void add_gramian_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--network", o.network, "network file or builtin id (net1..net7, agg1..agg7)");
    cmd->add_option("--backend", o.backend, "Gramian backend")
        ->check(CLI::IsMember({"quadrature", "legendre", "lyapunov", "datadriven"}));
    cmd->add_option("--dt", o.dt, "integration step")->check(CLI::PositiveNumber);
    cmd->add_option("--legendre-order", o.legendre_order, "series truncation order")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", o.seed, "random seed for synthetic trajectories");
    cmd->add_option("--count", o.count, "synthetic trajectory count (default n + 2)");
    cmd->add_flag("--allow-rank-deficient", o.allow_rank_deficient,
                  "degrade gracefully when samples do not span the state space");
}

void add_solver_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--eps", o.eps, "terminal tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--sigma", o.sigma, "line search sufficient-decrease parameter");
    cmd->add_option("--rho", o.rho, "line search backtracking factor");
    cmd->add_option("--alpha0", o.alpha0, "initial line search step");
    cmd->add_option("--max-iters", o.max_iters, "iteration budget")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Controllability scores for time-varying network systems"};
    app.require_subcommand(1);
    Options o;
    int status = kExitOk;

    CLI::App* score = app.add_subcommand("score", "compute a controllability score");
    add_gramian_flags(score, o);
    add_solver_flags(score, o);
    score->add_option("--kind", o.kind, "score kind")->check(CLI::IsMember({"vcs", "aecs"}));
    score->add_option("--output", o.output, "output format")
        ->check(CLI::IsMember({"table", "records"}));
    score->add_option("--gramian-file", o.gramian_file, "precomputed Gramian bundle");
    score->add_option("--trajectories", o.trajectories, "trajectory file (datadriven backend)");
    score->callback([&] { status = cmd_score(o); });

    CLI::App* gramian = app.add_subcommand("gramian", "precompute a Gramian bundle");
    add_gramian_flags(gramian, o);
    gramian->add_option("--trajectories", o.trajectories, "trajectory file (datadriven backend)");
    gramian->add_option("--out", o.out, "output bundle path")->required();
    gramian->callback([&] { status = cmd_gramian(o); });

    CLI::App* certify = app.add_subcommand("certify", "score-uniqueness certificate");
    certify->add_option("--network", o.network, "network file or builtin id");
    certify->add_option("--dt", o.dt, "integration step")->check(CLI::PositiveNumber);
    certify->add_option("--output", o.output, "output format")
        ->check(CLI::IsMember({"table", "records"}));
    certify->callback([&] { status = cmd_certify(o); });

    CLI::App* centrality = app.add_subcommand("centrality", "control energy centralities");
    add_gramian_flags(centrality, o);
    add_solver_flags(centrality, o);
    centrality->add_option("--gramian-file", o.gramian_file, "precomputed Gramian bundle");
    centrality->add_option("--trajectories", o.trajectories, "trajectory file");
    centrality->add_option("--gcs", o.gcs, "per-snapshot generalized scores instead")
        ->check(CLI::IsMember({"vcs", "aecs"}));
    centrality->add_option("--output", o.output, "output format")
        ->check(CLI::IsMember({"table", "records"}));
    centrality->callback([&] { status = cmd_centrality(o); });

    CLI::App* generate = app.add_subcommand("generate-trajectories",
                                            "synthesize unit-sphere trajectories");
    generate->add_option("--network", o.network, "network file or builtin id");
    generate->add_option("--dt", o.dt, "sampling period")->check(CLI::PositiveNumber);
    generate->add_option("--count", o.count, "trajectory count (default n + 2)");
    generate->add_option("--seed", o.seed, "random seed");
    generate->add_option("--out", o.out, "output trajectory file")->required();
    generate->callback([&] { status = cmd_generate(o); });

    CLI::App* reproduce = app.add_subcommand("reproduce",
                                             "recompute the bundled reference tables");
    std::string target;
    reproduce->add_option("target", target, "II, III, IV or fig5")
        ->required()
        ->check(CLI::IsMember({"II", "III", "IV", "fig5"}));
    reproduce->add_option("--seed", o.seed, "base seed for fig5 trials");
    reproduce->add_option("--dt", o.dt, "integration step")->check(CLI::PositiveNumber);
    reproduce->add_option("--out-dir", o.out_dir, "artifact directory");
    reproduce->callback([&] { status = cmd_reproduce(o, target); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return status;
}
