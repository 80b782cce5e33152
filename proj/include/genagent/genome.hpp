#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "genagent/fitness.hpp"
#include "genagent/operators.hpp"
#include "genagent/rng.hpp"

namespace genagent {

// One agent = one gene: an operator flag per admissible operator plus the
// real-valued parameter block, both in the kind's fixed layout.
struct Gene {
    std::string object_id;
    FeatureKind kind = FeatureKind::Building;
    std::uint8_t flags = 0;
    std::vector<double> params;  // [tolerance, dx, dy] (+ [factor] for buildings)
};

struct Chromosome {
    Gene gene;
    std::optional<FitnessComponents> fitness;
};

// Lexicographic order over the [flags | params] encoding; the last tie-break
// behind the fitness components.
bool encoding_less(const Gene& a, const Gene& b);

// No flags, neutral parameters: decodes to the untouched original geometry.
Gene zero_gene(const std::string& object_id, FeatureKind kind);

struct GaConfig {
    std::size_t population_size = 20;
    std::size_t max_generations = 50;
    double fitness_threshold = 0.0;
    double time_budget_ms = 1000.0;
    std::size_t tournament_size = 2;
    double crossover_rate = 0.9;
    double flag_mutation_rate = 0.05;
    double param_mutation_sigma = 0.1;  // fraction of each parameter's range
    std::size_t elitism_count = 1;
    std::uint64_t rng_seed = 0;
    std::size_t lattice_levels = 0;  // >= 2: quantize each parameter to this many values
};

void validate(const GaConfig& cfg);  // throws ConfigError

// population_size chromosomes for one object; member 0 is always the zero
// chromosome (no flags, neutral parameters), the rest are uniform random.
std::vector<Chromosome> init_population(const std::string& object_id, FeatureKind kind,
                                        const GaConfig& cfg, const ParamBounds& bounds, Rng& rng);

// Single-point crossover on the [flags | params] concatenation. With
// probability 1 - crossover_rate the children are plain copies.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b,
                                            double crossover_rate, Rng& rng);

Chromosome mutate(const Chromosome& c, const GaConfig& cfg, const ParamBounds& bounds, Rng& rng);

struct AgentContext {
    const MapObject* object = nullptr;
    std::vector<NeighborSnapshot> neighbors;
    ScaleSpec spec;
    Tunables tun;
    ParamBounds bounds;
};

struct GaResult {
    Chromosome best;                     // best ever seen, fitness filled
    std::vector<double> best_f_history;  // best-ever f after each evaluated generation
    std::size_t generations_run = 0;
};

// Evaluate / select / crossover / mutate with elitism until the threshold,
// the generation cap, or the time budget is hit. Deterministic for a fixed
// config whenever the time budget does not bind (the clock is consulted only
// at generation boundaries).
GaResult run_ga(const AgentContext& ctx, const GaConfig& cfg);

// The plan a chromosome decodes to, applied to the agent's object.
PlanOutcome decode_apply(const AgentContext& ctx, const Gene& gene);

}  // namespace genagent
