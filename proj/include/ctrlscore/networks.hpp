#pragma once

#include "ctrlscore/system.hpp"

#include <string>
#include <vector>

namespace ctrlscore {

/// Bundled 10-node example networks: seven temporal networks built from four
/// snapshot topologies (ids "net1".."net7") and their duration-weighted
/// aggregations ("agg1".."agg7").
bool is_builtin_network(const std::string& id);
std::vector<std::string> builtin_network_ids();

/// Spec of a temporal builtin ("net1".."net7").
NetworkSpec builtin_spec(const std::string& id);

/// System for any builtin id, aggregated when the id starts with "agg".
TemporalSystem builtin_system(const std::string& id);

}  // namespace ctrlscore
