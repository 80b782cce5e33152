#include "genagent/genome.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

namespace genagent {

namespace {

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// Nearest lattice value of [lo, hi] split into `levels` points.
double snap_lattice(double v, const ParamRange& r, std::size_t levels) {
    const double span = r.hi - r.lo;
    if (span <= 0.0 || levels < 2) return r.lo;
    const double step = span / static_cast<double>(levels - 1);
    double k = std::nearbyint((v - r.lo) / step);
    k = clamp(k, 0.0, static_cast<double>(levels - 1));
    return r.lo + k * step;
}

struct BestTracker {
    Chromosome best;
    bool has = false;

    void offer(const Chromosome& c) {
        if (!has) {
            best = c;
            has = true;
            return;
        }
        const FitnessComponents& fa = *c.fitness;
        const FitnessComponents& fb = *best.fitness;
        if (fitness_better(fa, fb) ||
            (!fitness_better(fb, fa) && encoding_less(c.gene, best.gene)))
            best = c;
    }
};

}  // namespace

Gene zero_gene(const std::string& object_id, FeatureKind kind) {
    Gene g;
    g.object_id = object_id;
    g.kind = kind;
    g.flags = 0;
    g.params.assign(param_count(kind), 0.0);
    if (kind == FeatureKind::Building) g.params[3] = 1.0;  // neutral enlarge factor
    return g;
}

bool encoding_less(const Gene& a, const Gene& b) {
    if (a.flags != b.flags) return a.flags < b.flags;
    return std::lexicographical_compare(a.params.begin(), a.params.end(), b.params.begin(),
                                        b.params.end());
}

void validate(const GaConfig& cfg) {
    if (cfg.population_size < 2) throw ConfigError("population_size must be >= 2");
    if (cfg.elitism_count >= cfg.population_size)
        throw ConfigError("elitism_count must be < population_size");
    if (cfg.tournament_size < 1) throw ConfigError("tournament_size must be >= 1");
    auto rate = [](double r) { return r >= 0.0 && r <= 1.0; };
    if (!rate(cfg.crossover_rate)) throw ConfigError("crossover_rate must be in [0,1]");
    if (!rate(cfg.flag_mutation_rate)) throw ConfigError("flag_mutation_rate must be in [0,1]");
    if (cfg.param_mutation_sigma < 0.0) throw ConfigError("param_mutation_sigma must be >= 0");
    if (cfg.fitness_threshold < 0.0) throw ConfigError("fitness_threshold must be >= 0");
    if (cfg.time_budget_ms < 0.0) throw ConfigError("time_budget_ms must be >= 0");
    if (cfg.lattice_levels == 1) throw ConfigError("lattice_levels must be 0 or >= 2");
}

std::vector<Chromosome> init_population(const std::string& object_id, FeatureKind kind,
                                        const GaConfig& cfg, const ParamBounds& bounds, Rng& rng) {
    std::vector<Chromosome> pop;
    pop.reserve(cfg.population_size);
    pop.push_back({zero_gene(object_id, kind), std::nullopt});
    const std::size_t nf = flag_count(kind);
    const std::size_t np = param_count(kind);
    while (pop.size() < cfg.population_size) {
        Gene g;
        g.object_id = object_id;
        g.kind = kind;
        for (std::size_t i = 0; i < nf; ++i)
            if (rng.next_bool(0.5)) g.flags |= static_cast<std::uint8_t>(1u << i);
        g.params.resize(np);
        for (std::size_t i = 0; i < np; ++i) {
            const ParamRange r = param_range(kind, i, bounds);
            if (cfg.lattice_levels >= 2) {
                const std::uint64_t k = rng.next_below(cfg.lattice_levels);
                g.params[i] = r.lo + static_cast<double>(k) * (r.hi - r.lo) /
                                         static_cast<double>(cfg.lattice_levels - 1);
            } else {
                g.params[i] = rng.next_uniform(r.lo, r.hi);
            }
        }
        pop.push_back({std::move(g), std::nullopt});
    }
    return pop;
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b,
                                            double crossover_rate, Rng& rng) {
    if (a.gene.kind != b.gene.kind) throw KindMismatch("crossover needs same-kind chromosomes");
    Chromosome c1{a.gene, std::nullopt};
    Chromosome c2{b.gene, std::nullopt};
    if (rng.next_double() >= crossover_rate) return {std::move(c1), std::move(c2)};

    const std::size_t nf = flag_count(a.gene.kind);
    const std::size_t np = a.gene.params.size();
    const std::size_t cut = static_cast<std::size_t>(rng.next_below(nf + np + 1));
    // slots [0, cut) from the first parent, [cut, nf+np) from the second
    for (std::size_t s = cut; s < nf + np; ++s) {
        if (s < nf) {
            const std::uint8_t bit = static_cast<std::uint8_t>(1u << s);
            const std::uint8_t fa = a.gene.flags & bit, fb = b.gene.flags & bit;
            c1.gene.flags = static_cast<std::uint8_t>((c1.gene.flags & ~bit) | fb);
            c2.gene.flags = static_cast<std::uint8_t>((c2.gene.flags & ~bit) | fa);
        } else {
            c1.gene.params[s - nf] = b.gene.params[s - nf];
            c2.gene.params[s - nf] = a.gene.params[s - nf];
        }
    }
    return {std::move(c1), std::move(c2)};
}

Chromosome mutate(const Chromosome& c, const GaConfig& cfg, const ParamBounds& bounds, Rng& rng) {
    Chromosome out{c.gene, std::nullopt};
    const std::size_t nf = flag_count(c.gene.kind);
    for (std::size_t i = 0; i < nf; ++i)
        if (rng.next_bool(cfg.flag_mutation_rate))
            out.gene.flags ^= static_cast<std::uint8_t>(1u << i);
    for (std::size_t i = 0; i < out.gene.params.size(); ++i) {
        const ParamRange r = param_range(c.gene.kind, i, bounds);
        const double delta = rng.next_normal() * cfg.param_mutation_sigma * (r.hi - r.lo);
        double v = clamp(out.gene.params[i] + delta, r.lo, r.hi);
        if (cfg.lattice_levels >= 2) v = snap_lattice(v, r, cfg.lattice_levels);
        out.gene.params[i] = v;
    }
    return out;
}

PlanOutcome decode_apply(const AgentContext& ctx, const Gene& gene) {
    return apply_plan(*ctx.object, gene.flags, decode_params(gene.kind, gene.params), ctx.tun,
                      ctx.bounds);
}

GaResult run_ga(const AgentContext& ctx, const GaConfig& cfg) {
    validate(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed_ms = [&t0] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    Rng rng(cfg.rng_seed);
    std::unordered_map<std::uint64_t, FitnessComponents> cache;
    constexpr std::uint64_t kEliminatedKey = 0x9e3779b97f4a7c15ull;

    auto evaluate = [&](Chromosome& c) {
        if (c.fitness) return;
        const PlanOutcome o = decode_apply(ctx, c.gene);
        const std::uint64_t key = o.geometry ? geometry_hash(*o.geometry) : kEliminatedKey;
        if (const auto it = cache.find(key); it != cache.end()) {
            c.fitness = it->second;
            return;
        }
        const FitnessComponents fc = general_fitness(*ctx.object, o.geometry, o.displacement,
                                                     ctx.neighbors, ctx.spec, ctx.tun);
        cache.emplace(key, fc);
        c.fitness = fc;
    };

    auto better_idx = [](const std::vector<Chromosome>& pop, std::size_t i, std::size_t j) {
        const FitnessComponents& fi = *pop[i].fitness;
        const FitnessComponents& fj = *pop[j].fitness;
        if (fitness_better(fi, fj)) return true;
        if (fitness_better(fj, fi)) return false;
        return encoding_less(pop[i].gene, pop[j].gene);
    };

    std::vector<Chromosome> pop =
        init_population(ctx.object->id, ctx.object->kind, cfg, ctx.bounds, rng);
    BestTracker tracker;
    for (Chromosome& c : pop) {
        evaluate(c);
        tracker.offer(c);
    }

    GaResult res;
    res.best_f_history.push_back(tracker.best.fitness->f);

    std::size_t gen = 0;
    while (gen < cfg.max_generations && tracker.best.fitness->f > cfg.fitness_threshold &&
           elapsed_ms() < cfg.time_budget_ms) {
        std::vector<std::size_t> order(pop.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t i, std::size_t j) { return better_idx(pop, i, j); });

        std::vector<Chromosome> next;
        next.reserve(cfg.population_size);
        for (std::size_t e = 0; e < cfg.elitism_count; ++e) next.push_back(pop[order[e]]);

        auto tournament = [&]() -> const Chromosome& {
            std::size_t win = static_cast<std::size_t>(rng.next_below(pop.size()));
            for (std::size_t t = 1; t < cfg.tournament_size; ++t) {
                const std::size_t ch = static_cast<std::size_t>(rng.next_below(pop.size()));
                if (better_idx(pop, ch, win)) win = ch;
            }
            return pop[win];
        };
        while (next.size() < cfg.population_size) {
            const Chromosome& pa = tournament();  // sequence the draws explicitly
            const Chromosome& pb = tournament();
            auto [c1, c2] = crossover(pa, pb, cfg.crossover_rate, rng);
            next.push_back(mutate(c1, cfg, ctx.bounds, rng));
            if (next.size() < cfg.population_size)
                next.push_back(mutate(c2, cfg, ctx.bounds, rng));
        }
        pop = std::move(next);
        for (Chromosome& c : pop) {
            evaluate(c);
            tracker.offer(c);
        }
        ++gen;
        res.best_f_history.push_back(tracker.best.fitness->f);
    }

    res.best = tracker.best;
    res.generations_run = gen;
    return res;
}

}  // namespace genagent
