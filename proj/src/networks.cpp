#include "ctrlscore/networks.hpp"

#include "ctrlscore/errors.hpp"

#include <array>

namespace ctrlscore {

namespace {

// Snapshot edge lists (1-based, weight 1). Every node additionally carries a
// self-loop of weight -0.2 through the spec's self_loop field.
const std::vector<Edge> kSnapshotA = {{2, 10, 1.0}, {3, 8, 1.0}, {7, 2, 1.0},
                                      {7, 3, 1.0},  {9, 1, 1.0}, {10, 6, 1.0}};
const std::vector<Edge> kSnapshotB = {{4, 6, 1.0}, {7, 1, 1.0}, {7, 4, 1.0}, {9, 1, 1.0}};
const std::vector<Edge> kSnapshotC = {{1, 5, 1.0}, {2, 10, 1.0}, {3, 8, 1.0},
                                      {7, 2, 1.0}, {7, 3, 1.0},  {10, 6, 1.0}};
const std::vector<Edge> kSnapshotD = {{1, 5, 1.0}, {4, 6, 1.0}, {7, 1, 1.0}, {7, 4, 1.0}};

struct BuiltinDef {
    const char* id;
    bool directed;
    std::array<const std::vector<Edge>*, 4> order;
    std::array<double, 4> durations;
};

const BuiltinDef kBuiltins[] = {
    {"net1", true, {&kSnapshotA, &kSnapshotB, &kSnapshotC, &kSnapshotD}, {2.0, 2.0, 2.0, 2.0}},
    {"net2", false, {&kSnapshotA, &kSnapshotB, &kSnapshotC, &kSnapshotD}, {2.0, 2.0, 2.0, 2.0}},
    {"net3", true, {&kSnapshotA, &kSnapshotB, &kSnapshotC, &kSnapshotD}, {1.9, 2.1, 2.2, 1.8}},
    {"net4", true, {&kSnapshotA, &kSnapshotB, &kSnapshotC, &kSnapshotD}, {0.5, 2.8, 1.8, 2.9}},
    {"net5", true, {&kSnapshotB, &kSnapshotD, &kSnapshotA, &kSnapshotC}, {2.0, 2.0, 2.0, 2.0}},
    {"net6", true, {&kSnapshotB, &kSnapshotD, &kSnapshotA, &kSnapshotC}, {2.1, 1.8, 1.9, 2.2}},
    {"net7", true, {&kSnapshotB, &kSnapshotD, &kSnapshotA, &kSnapshotC}, {2.8, 2.9, 0.5, 1.8}},
};

const BuiltinDef* find_builtin(const std::string& name) {
    for (const BuiltinDef& def : kBuiltins) {
        if (name == def.id) return &def;
    }
    return nullptr;
}

NetworkSpec make_spec(const BuiltinDef& def) {
    NetworkSpec spec;
    spec.n = 10;
    spec.self_loop = -0.2;
    spec.directed = def.directed;
    for (std::size_t k = 0; k < def.order.size(); ++k) {
        NetworkSnapshot snap;
        snap.duration = def.durations[k];
        for (const Edge& e : *def.order[k]) {
            snap.edges.push_back(Edge{e.from - 1, e.to - 1, e.weight});
        }
        spec.snapshots.push_back(std::move(snap));
    }
    return spec;
}

}  // namespace

bool is_builtin_network(const std::string& id) {
    if (id.rfind("agg", 0) == 0) {
        return find_builtin("net" + id.substr(3)) != nullptr;
    }
    return find_builtin(id) != nullptr;
}

std::vector<std::string> builtin_network_ids() {
    std::vector<std::string> ids;
    for (const BuiltinDef& def : kBuiltins) ids.emplace_back(def.id);
    for (const BuiltinDef& def : kBuiltins) ids.emplace_back("agg" + std::string(def.id).substr(3));
    return ids;
}

NetworkSpec builtin_spec(const std::string& id) {
    const BuiltinDef* def = find_builtin(id);
    if (def == nullptr) {
        throw ValidationError("unknown builtin network '" + id + "'");
    }
    return make_spec(*def);
}

TemporalSystem builtin_system(const std::string& id) {
    if (id.rfind("agg", 0) == 0) {
        return aggregate(build_system(builtin_spec("net" + id.substr(3))));
    }
    return build_system(builtin_spec(id));
}

}  // namespace ctrlscore
