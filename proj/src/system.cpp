#include "ctrlscore/system.hpp"

#include "ctrlscore/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

namespace ctrlscore {

using nlohmann::json;

Eigen::MatrixXd Segment::evaluate(double local_time) const {
    if (is_constant()) {
        return constant();
    }
    return std::get<AnalyticMatrix>(source).evaluate(local_time);
}

TemporalSystem::TemporalSystem(int n, std::vector<Segment> segments,
                               std::vector<std::string> node_labels)
    : n_(n), segments_(std::move(segments)), node_labels_(std::move(node_labels)) {
    if (n_ < 1) {
        throw ValidationError("system dimension must be at least 1");
    }
    if (segments_.empty()) {
        throw ValidationError("system needs at least one segment");
    }
    switch_times_.reserve(segments_.size() + 1);
    switch_times_.push_back(0.0);
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        const Segment& seg = segments_[k];
        if (!(seg.duration >= 0.0)) {
            throw ValidationError("segment " + std::to_string(k + 1) + " has negative duration");
        }
        if (seg.is_constant()) {
            const Eigen::MatrixXd& A = seg.constant();
            if (A.rows() != n_ || A.cols() != n_) {
                throw ValidationError("segment " + std::to_string(k + 1) +
                                      " matrix dimension does not match system dimension");
            }
            if (!A.allFinite()) {
                throw ValidationError("segment " + std::to_string(k + 1) +
                                      " matrix has non-finite entries");
            }
        } else {
            const Eigen::MatrixXd probe = seg.evaluate(0.0);
            if (probe.rows() != n_ || probe.cols() != n_) {
                throw ValidationError("segment " + std::to_string(k + 1) +
                                      " evaluator dimension does not match system dimension");
            }
        }
        switch_times_.push_back(switch_times_.back() + seg.duration);
    }
    if (!node_labels_.empty() && node_labels_.size() != static_cast<std::size_t>(n_)) {
        throw ValidationError("node label count does not match system dimension");
    }
}

bool TemporalSystem::all_constant() const {
    return std::all_of(segments_.begin(), segments_.end(),
                       [](const Segment& s) { return s.is_constant(); });
}

Eigen::MatrixXd TemporalSystem::matrix_at(double t) const {
    const double t_m = final_time();
    if (!(t >= 0.0 && t <= t_m)) {
        throw ValidationError("time " + std::to_string(t) + " outside [0, " +
                              std::to_string(t_m) + "]");
    }
    // First segment whose half-open interval [t_{k-1}, t_k) contains t;
    // zero-duration segments never match.
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        if (t >= switch_times_[k] && t < switch_times_[k + 1]) {
            return segments_[k].evaluate(t - switch_times_[k]);
        }
    }
    // t == t_m: closed right endpoint of the last positive-duration segment.
    for (std::size_t k = segments_.size(); k-- > 0;) {
        if (segments_[k].duration > 0.0) {
            return segments_[k].evaluate(segments_[k].duration);
        }
    }
    throw ValidationError("system has zero horizon");
}

Eigen::MatrixXd NetworkSpec::adjacency(std::size_t k) const {
    if (k >= snapshots.size()) {
        throw ValidationError("snapshot index out of range");
    }
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : snapshots[k].edges) {
        A(e.to, e.from) = e.weight;
        if (!directed) {
            A(e.from, e.to) = e.weight;
        }
    }
    A.diagonal().array() += self_loop;
    return A;
}

namespace {

[[noreturn]] void malformed(const std::string& detail) {
    throw ValidationError("malformed network document: " + detail);
}

}  // namespace

NetworkSpec parse_network(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        malformed(e.what());
    }
    if (!doc.is_object()) malformed("top level must be an object");
    for (const char* field : {"n", "self_loop", "directed", "snapshots"}) {
        if (!doc.contains(field)) malformed(std::string("missing field '") + field + "'");
    }

    NetworkSpec spec;
    try {
        spec.n = doc.at("n").get<int>();
        spec.self_loop = doc.at("self_loop").get<double>();
        spec.directed = doc.at("directed").get<bool>();
    } catch (const json::exception& e) {
        malformed(e.what());
    }
    if (spec.n < 1) malformed("n must be at least 1");
    if (!std::isfinite(spec.self_loop)) malformed("self_loop must be finite");

    const json& snaps = doc.at("snapshots");
    if (!snaps.is_array() || snaps.empty()) malformed("snapshots must be a nonempty array");

    for (std::size_t k = 0; k < snaps.size(); ++k) {
        const json& js = snaps[k];
        const std::string where = "snapshot " + std::to_string(k + 1);
        if (!js.is_object() || !js.contains("duration") || !js.contains("edges")) {
            malformed(where + " needs 'duration' and 'edges'");
        }
        NetworkSnapshot snap;
        try {
            snap.duration = js.at("duration").get<double>();
        } catch (const json::exception& e) {
            malformed(e.what());
        }
        if (!(snap.duration >= 0.0) || !std::isfinite(snap.duration)) {
            throw ValidationError(where + " has negative duration");
        }

        std::set<std::pair<int, int>> seen;
        for (const json& je : js.at("edges")) {
            if (!je.is_array() || je.size() != 3) {
                malformed(where + " edges must be [from, to, weight] triples");
            }
            Edge e;
            try {
                e.from = je[0].get<int>();
                e.to = je[1].get<int>();
                e.weight = je[2].get<double>();
            } catch (const json::exception& ex) {
                malformed(ex.what());
            }
            if (e.from < 1 || e.from > spec.n || e.to < 1 || e.to > spec.n) {
                throw ValidationError(where + ": node index out of range [1, " +
                                      std::to_string(spec.n) + "]");
            }
            if (!std::isfinite(e.weight)) malformed(where + " has non-finite edge weight");
            e.from -= 1;
            e.to -= 1;
            if (!seen.insert({e.from, e.to}).second ||
                (!spec.directed && e.from != e.to && seen.count({e.to, e.from}) > 0)) {
                throw ValidationError(where + ": duplicate edge " + std::to_string(e.from + 1) +
                                      " -> " + std::to_string(e.to + 1));
            }
            if (!spec.directed) seen.insert({e.to, e.from});
            snap.edges.push_back(e);
        }
        spec.snapshots.push_back(std::move(snap));
    }
    return spec;
}

std::string serialize_network(const NetworkSpec& spec) {
    json doc;
    doc["n"] = spec.n;
    doc["self_loop"] = spec.self_loop;
    doc["directed"] = spec.directed;
    doc["snapshots"] = json::array();
    for (const NetworkSnapshot& snap : spec.snapshots) {
        json js;
        js["duration"] = snap.duration;
        js["edges"] = json::array();
        for (const Edge& e : snap.edges) {
            js["edges"].push_back(json::array({e.from + 1, e.to + 1, e.weight}));
        }
        doc["snapshots"].push_back(std::move(js));
    }
    return doc.dump(2) + "\n";
}

TemporalSystem build_system(const NetworkSpec& spec) {
    std::vector<Segment> segments;
    segments.reserve(spec.snapshots.size());
    for (std::size_t k = 0; k < spec.snapshots.size(); ++k) {
        segments.push_back(Segment{ConstantMatrix{spec.adjacency(k)}, spec.snapshots[k].duration});
    }
    return TemporalSystem(spec.n, std::move(segments));
}

TemporalSystem aggregate(const TemporalSystem& sys) {
    if (!sys.all_constant()) {
        throw ValidationError("aggregate requires constant segments");
    }
    const double t_m = sys.final_time();
    if (!(t_m > 0.0)) {
        throw ValidationError("aggregate requires a positive horizon");
    }
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(sys.dimension(), sys.dimension());
    for (const Segment& seg : sys.segments()) {
        mean += (seg.duration / t_m) * seg.constant();
    }
    return TemporalSystem(sys.dimension(), {Segment{ConstantMatrix{std::move(mean)}, t_m}},
                          sys.node_labels());
}

}  // namespace ctrlscore
