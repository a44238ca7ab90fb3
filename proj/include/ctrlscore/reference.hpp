#pragma once

#include <array>

namespace ctrlscore::reference {

/// Published reference values for the bundled example networks, used by the
/// reproduce command and the acceptance suite. Scores are rounded to three
/// decimals, energy centralities to the listed precision.

struct CentralityRow {
    double vcs;
    double aecs;
    double vce;
    double ace;
    double ac;
};

/// Temporal network 1 and its aggregation: all five indices per node.
extern const std::array<CentralityRow, 10> kNet1Centralities;
extern const std::array<CentralityRow, 10> kAgg1Centralities;

/// Undirected network 2: temporal volumetric scores (the per-snapshot and
/// aggregated volumetric scores are uniform 0.100).
extern const std::array<double, 10> kNet2VcsTemporal;

/// Undirected network 2, average-energy family: columns are the temporal
/// score, the four per-snapshot scores and the aggregated score.
extern const std::array<std::array<double, 6>, 10> kNet2AecsColumns;

/// Score columns for networks 1, 3, 4, 5, 6, 7 (in that order).
extern const std::array<std::array<double, 6>, 10> kVcsByNetwork;
extern const std::array<std::array<double, 6>, 10> kAecsByNetwork;
extern const std::array<const char*, 6> kNetworkColumnIds;

}  // namespace ctrlscore::reference
