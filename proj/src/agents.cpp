#include "genagent/agents.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

#include "genagent/errors.hpp"
#include "genagent/fitness.hpp"

namespace genagent {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Independent GA stream per (agent, round) so worker scheduling can't touch
// the draws.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t agent, std::uint64_t round) {
    std::uint64_t s =
        base ^ ((agent + 1) * 0xA24BAED4963EE407ull) ^ ((round + 1) * 0x9FB21C651E98DF25ull);
    return splitmix64(s);
}

struct LiveView {
    std::vector<SceneItem> items;
    std::vector<std::size_t> live_index;  // graph node -> agent index
};

LiveView live_view(const std::vector<AgentState>& agents) {
    LiveView v;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        if (!agents[i].committed) continue;
        v.items.push_back({agents[i].object.id, agents[i].object.kind, &*agents[i].committed});
        v.live_index.push_back(i);
    }
    return v;
}

// Everything a commit changes, so the session can roll back to its best round.
struct CommitState {
    std::optional<Geometry> committed;
    Point2 displacement;
    Chromosome plan;
    std::vector<ConstraintEval> evals;
    std::uint8_t applied = 0;
};

}  // namespace

std::vector<std::vector<NeighborSnapshot>> snapshot_exchange(
    const ConflictGraph& graph, const std::vector<std::size_t>& live_index,
    const std::vector<AgentState>& agents) {
    std::vector<std::vector<NeighborSnapshot>> out(agents.size());
    auto add = [&](std::size_t dst, std::size_t src) {
        const AgentState& s = agents[live_index[src]];
        out[live_index[dst]].push_back({s.object.id, s.object.kind, *s.committed});
    };
    // Edges are sorted, so every neighbor list comes out ascending by node.
    for (const auto& [a, b] : graph.edges) {
        add(a, b);
        add(b, a);
    }
    return out;
}

std::vector<std::size_t> select_active(const ConflictGraph& graph,
                                       const std::vector<std::size_t>& live_index,
                                       const std::vector<AgentState>& agents) {
    std::vector<std::size_t> out;
    for (std::size_t n = 0; n < live_index.size(); ++n) {
        const AgentState& a = agents[live_index[n]];
        if (graph.degree[n] >= 1 || !all_offensive_satisfied(a.evals))
            out.push_back(live_index[n]);
    }
    return out;
}

SessionResult run_session(const std::vector<MapObject>& objects, const ScaleSpec& spec,
                          const GaConfig& ga, const SessionConfig& session, const Tunables& tun) {
    if (objects.empty()) throw EmptyScene("no features to generalize");
    validate(ga);

    const Clock::time_point t0 = Clock::now();

    std::vector<AgentState> agents;
    agents.reserve(objects.size());
    for (const MapObject& o : objects) {
        agents.push_back(AgentState{o, o.geometry, Point2{0.0, 0.0}, {}, {},
                                    Chromosome{zero_gene(o.id, o.kind), std::nullopt}, 0});
        AgentState& a = agents.back();
        a.evals = evaluate_internal(a.object, a.committed, spec);
    }

    ParamBounds bounds = derive_bounds(spec, tun);

    std::vector<RoundReport> rounds;

    bool best_set = false;
    std::size_t best_nc = 0;
    double best_f_sum = 0.0;
    std::size_t best_round = 0;
    std::vector<CommitState> best_state;

    std::size_t stall = 0;
    std::size_t prev_nc = 0;
    double prev_f_sum = 0.0;

    for (std::size_t round = 0;; ++round) {
        const LiveView lv = live_view(agents);
        const ConflictGraph graph = build_conflict_graph(lv.items, spec);
        const auto snapshots = snapshot_exchange(graph, lv.live_index, agents);

        for (AgentState& a : agents) a.neighbor_idx.clear();
        for (const auto& [a, b] : graph.edges) {
            agents[lv.live_index[a]].neighbor_idx.push_back(lv.live_index[b]);
            agents[lv.live_index[b]].neighbor_idx.push_back(lv.live_index[a]);
        }

        const std::size_t nc_now = graph.objects_in_conflict();
        double f_sum = 0.0;
        RoundReport rep;
        rep.round_index = round;
        rep.global_nc = nc_now;
        rep.per_agent.reserve(agents.size());
        for (std::size_t i = 0; i < agents.size(); ++i) {
            const FitnessComponents fc =
                general_fitness(agents[i].object, agents[i].committed,
                                agents[i].committed_displacement, snapshots[i], spec, tun);
            f_sum += fc.f;
            rep.per_agent.push_back({agents[i].object.id, fc});
        }
        rep.global_f_sum = f_sum;
        rep.elapsed_ms = ms_since(t0);
        rounds.push_back(std::move(rep));

        if (!best_set || nc_now < best_nc || (nc_now == best_nc && f_sum < best_f_sum)) {
            best_set = true;
            best_nc = nc_now;
            best_f_sum = f_sum;
            best_round = round;
            best_state.clear();
            best_state.reserve(agents.size());
            for (const AgentState& a : agents)
                best_state.push_back(
                    {a.committed, a.committed_displacement, a.best_plan, a.evals, a.applied});
        }

        bool satisfied = nc_now == 0;
        for (std::size_t i = 0; satisfied && i < agents.size(); ++i)
            satisfied = all_offensive_satisfied(agents[i].evals);
        if (satisfied || round >= session.max_rounds || ms_since(t0) >= session.deadline_ms) break;

        // Two rounds without improvement reads as displacement ping-pong;
        // damp the move range until something else gives.
        if (round > 0) {
            const bool improved = nc_now < prev_nc || (nc_now == prev_nc && f_sum < prev_f_sum);
            stall = improved ? 0 : stall + 1;
            if (stall >= 2) bounds.disp_max *= 0.5;
        }
        prev_nc = nc_now;
        prev_f_sum = f_sum;

        const std::vector<std::size_t> active = select_active(graph, lv.live_index, agents);
        if (active.empty()) break;

        const double remaining = session.deadline_ms - ms_since(t0);
        const double budget = std::max(50.0, remaining / static_cast<double>(active.size()));

        std::vector<std::optional<Chromosome>> winners(agents.size());
        std::atomic<std::size_t> cursor{0};
        std::exception_ptr err;
        std::mutex err_mu;

        auto work = [&]() {
            try {
                for (;;) {
                    const std::size_t k = cursor.fetch_add(1, std::memory_order_relaxed);
                    if (k >= active.size()) return;
                    const std::size_t i = active[k];
                    AgentContext ctx{&agents[i].object, snapshots[i], spec, tun, bounds};
                    GaConfig cfg = ga;
                    cfg.time_budget_ms = budget;
                    cfg.rng_seed = derive_seed(session.seed, i, round);
                    winners[i] = run_ga(ctx, cfg).best;
                }
            } catch (...) {
                const std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
            }
        };

        std::size_t nw = session.workers ? session.workers : std::thread::hardware_concurrency();
        if (nw == 0) nw = 1;
        nw = std::min(nw, active.size());
        if (nw <= 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(nw);
            for (std::size_t t = 0; t < nw; ++t) pool.emplace_back(work);
            for (std::thread& t : pool) t.join();
        }
        if (err) std::rethrow_exception(err);

        // Barrier commit against the round's snapshot: every agent keeps its
        // incumbent plan unless the search strictly beat it, so commit order
        // (and worker count) can't change the outcome.
        for (const std::size_t i : active) {
            const Chromosome& cand = *winners[i];
            if (!cand.fitness) continue;
            const FitnessComponents inc =
                general_fitness(agents[i].object, agents[i].committed,
                                agents[i].committed_displacement, snapshots[i], spec, tun);
            if (!fitness_better(*cand.fitness, inc)) continue;
            AgentContext ctx{&agents[i].object, snapshots[i], spec, tun, bounds};
            PlanOutcome out = decode_apply(ctx, cand.gene);
            agents[i].committed = std::move(out.geometry);
            agents[i].committed_displacement = out.displacement;
            agents[i].best_plan = cand;
            agents[i].applied = out.applied;
            agents[i].evals = evaluate_internal(agents[i].object, agents[i].committed, spec);
        }
    }

    for (std::size_t i = 0; i < agents.size(); ++i) {
        agents[i].committed = std::move(best_state[i].committed);
        agents[i].committed_displacement = best_state[i].displacement;
        agents[i].best_plan = std::move(best_state[i].plan);
        agents[i].evals = std::move(best_state[i].evals);
        agents[i].applied = best_state[i].applied;
    }

    return {std::move(agents), std::move(rounds), best_round};
}

}  // namespace genagent
