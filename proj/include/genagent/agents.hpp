#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "genagent/constraints.hpp"
#include "genagent/genome.hpp"

namespace genagent {

struct AgentState {
    MapObject object;                  // original geometry lives here
    std::optional<Geometry> committed; // nullopt == eliminated
    Point2 committed_displacement{0.0, 0.0};
    std::vector<ConstraintEval> evals; // of the committed geometry
    std::vector<std::size_t> neighbor_idx;
    Chromosome best_plan;
    std::uint8_t applied = 0;  // operator mask the committed plan actually ran
};

struct AgentReport {
    std::string id;
    FitnessComponents fitness;
};

struct RoundReport {
    std::size_t round_index = 0;
    std::size_t global_nc = 0;
    double global_f_sum = 0.0;
    double elapsed_ms = 0.0;  // wall clock; serialized reports omit it to stay reproducible
    std::vector<AgentReport> per_agent;
};

struct SessionConfig {
    std::size_t max_rounds = 10;
    double deadline_ms = 10000.0;
    std::size_t workers = 0;  // 0 = hardware concurrency
    std::uint64_t seed = 0;
};

struct SessionResult {
    std::vector<AgentState> agents;  // rolled back to the best round's state
    std::vector<RoundReport> rounds;
    std::size_t best_round = 0;  // the round the final agent state comes from
};

// Neighbor snapshots per agent for one round: agent i receives the committed
// geometries of its conflict-graph neighbors. live_index maps graph nodes to
// agent indices.
std::vector<std::vector<NeighborSnapshot>> snapshot_exchange(
    const ConflictGraph& graph, const std::vector<std::size_t>& live_index,
    const std::vector<AgentState>& agents);

// Agents that must act: in conflict, or with an unmet offensive constraint.
std::vector<std::size_t> select_active(const ConflictGraph& graph,
                                       const std::vector<std::size_t>& live_index,
                                       const std::vector<AgentState>& agents);

// Synchronous rounds: evaluate and report, stop on satisfaction / round cap /
// deadline, otherwise let every active agent search in parallel against the
// round's immutable snapshot and commit the winners at a barrier. The
// best-observed global state (fewest objects in conflict, then lowest fitness
// sum, then earliest round) is what the session finally returns.
SessionResult run_session(const std::vector<MapObject>& objects, const ScaleSpec& spec,
                          const GaConfig& ga, const SessionConfig& session, const Tunables& tun);

}  // namespace genagent
