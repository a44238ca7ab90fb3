#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace ctrlscore {

/// Constant system matrix; the special case used for temporal networks /
/// switched systems.
struct ConstantMatrix {
    Eigen::MatrixXd matrix;
};

/// Time-varying system matrix given as an evaluator over local segment time
/// s in [0, duration]. Continuity on the segment is the caller's contract;
/// it is not verified here.
struct AnalyticMatrix {
    std::function<Eigen::MatrixXd(double)> evaluate;
};

using MatrixSource = std::variant<ConstantMatrix, AnalyticMatrix>;

/// One piece of a piecewise system description: a matrix source active for
/// `duration` time units. Zero durations are legal.
struct Segment {
    MatrixSource source;
    double duration = 0.0;

    bool is_constant() const { return std::holds_alternative<ConstantMatrix>(source); }
    const Eigen::MatrixXd& constant() const { return std::get<ConstantMatrix>(source).matrix; }
    Eigen::MatrixXd evaluate(double local_time) const;
};

/// Piecewise linear time-varying system x' = A(t) x on [0, t_m], described by
/// an ordered list of segments. Immutable after construction.
class TemporalSystem {
public:
    TemporalSystem(int n, std::vector<Segment> segments,
                   std::vector<std::string> node_labels = {});

    int dimension() const { return n_; }
    const std::vector<Segment>& segments() const { return segments_; }
    std::size_t segment_count() const { return segments_.size(); }
    const std::vector<std::string>& node_labels() const { return node_labels_; }

    /// Switch instants t_0 = 0, t_1, ..., t_m (size m+1, nondecreasing).
    const std::vector<double>& switch_times() const { return switch_times_; }
    double final_time() const { return switch_times_.back(); }

    bool all_constant() const;

    /// A(t) for global time t in [0, t_m]. Zero-duration segments are
    /// skipped; t = t_m evaluates the last positive-duration segment at its
    /// right endpoint.
    Eigen::MatrixXd matrix_at(double t) const;

private:
    int n_;
    std::vector<Segment> segments_;
    std::vector<double> switch_times_;
    std::vector<std::string> node_labels_;
};

/// File-level network description: per-snapshot edge lists plus a uniform
/// self-loop weight. Node indices are 0-based in memory (1-based in files).
struct Edge {
    int from = 0;
    int to = 0;
    double weight = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct NetworkSnapshot {
    double duration = 0.0;
    std::vector<Edge> edges;

    friend bool operator==(const NetworkSnapshot&, const NetworkSnapshot&) = default;
};

struct NetworkSpec {
    int n = 0;
    double self_loop = 0.0;
    bool directed = true;
    std::vector<NetworkSnapshot> snapshots;

    /// Adjacency matrix of snapshot k: edge (i -> j, w) sets A(j, i); an
    /// undirected spec also sets A(i, j); self_loop is then added to every
    /// diagonal entry.
    Eigen::MatrixXd adjacency(std::size_t k) const;

    friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

/// Parses a network description document (a single JSON object, see README
/// for the schema). Rejects malformed documents, out-of-range node indices,
/// duplicate edges and negative durations.
NetworkSpec parse_network(const std::string& text);

/// Inverse of parse_network; doubles are written exactly.
std::string serialize_network(const NetworkSpec& spec);

/// One ConstantMatrix segment per snapshot, in chronological order.
TemporalSystem build_system(const NetworkSpec& spec);

/// Duration-weighted average of the snapshot matrices as a single-segment
/// system over the same horizon. Requires all segments constant and t_m > 0.
TemporalSystem aggregate(const TemporalSystem& sys);

}  // namespace ctrlscore
