#include "loadsched/epoch_order.hpp"

#include <algorithm>
#include <numeric>

#include "loadsched/errors.hpp"
#include "loadsched/prng.hpp"

namespace loadsched {

std::uint64_t path_cost(const ReuseGraph& graph, const std::vector<std::uint32_t>& order) {
    const std::uint32_t E = graph.num_epochs;
    if (order.size() != E) throw ValidationError("path_cost: order length != num_epochs");
    std::vector<bool> seen(E, false);
    for (std::uint32_t v : order) {
        if (v >= E || seen[v]) throw ValidationError("path_cost: order is not a permutation");
        seen[v] = true;
    }
    std::uint64_t cost = 0;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) cost += graph.weight(order[i], order[i + 1]);
    return cost;
}

EpochOrder identity_order(const ReuseGraph& graph) {
    EpochOrder result;
    result.order.resize(graph.num_epochs);
    std::iota(result.order.begin(), result.order.end(), 0u);
    result.cost = path_cost(graph, result.order);
    return result;
}

EpochOrder brute_force_order(const ReuseGraph& graph) {
    const std::uint32_t E = graph.num_epochs;
    if (E == 0) throw ValidationError("brute_force_order: empty graph");
    if (E > 10) throw CapabilityError("brute_force_order: guarded to num_epochs <= 10");

    std::vector<std::uint32_t> perm(E);
    std::iota(perm.begin(), perm.end(), 0u);
    EpochOrder best{perm, path_cost(graph, perm)};
    // Lexicographic enumeration + strict improvement keeps the lexicographically
    // smallest order among all minimum-cost paths.
    while (std::next_permutation(perm.begin(), perm.end())) {
        std::uint64_t cost = 0;
        for (std::size_t i = 0; i + 1 < perm.size() && cost < best.cost; ++i)
            cost += graph.weight(perm[i], perm[i + 1]);
        if (cost < best.cost) {
            best.order = perm;
            best.cost = cost;
        }
    }
    return best;
}

namespace {

using Swap = std::pair<std::uint32_t, std::uint32_t>; // index pair

struct Particle {
    std::vector<std::uint32_t> pos;  // permutation
    std::vector<std::uint32_t> inv;  // inv[value] = index of value in pos
    std::vector<Swap> vel;           // transpositions applied last iteration
    std::vector<std::uint32_t> best; // personal best position
    std::uint64_t cost = 0;
    std::uint64_t best_cost = 0;
    std::uint32_t stale = 0; // iterations since the personal best improved
};

void apply_swap(Particle& p, std::uint32_t i, std::uint32_t j) {
    std::swap(p.pos[i], p.pos[j]);
    p.inv[p.pos[i]] = i;
    p.inv[p.pos[j]] = j;
}

// One probabilistic pull of `p` toward `target`: for each index, with
// probability `prob` swap the element at that index with wherever the
// target's element currently sits. Preserves permutation-ness by construction.
void pull_toward(Particle& p, const std::vector<std::uint32_t>& target, double prob,
                 SplitMix64& rng, std::vector<Swap>& out) {
    for (std::size_t i = 0; i < p.pos.size(); ++i) {
        if (rng.next_double() >= prob) continue;
        const std::uint32_t want = target[i];
        if (p.pos[i] == want) continue;
        const std::uint32_t j = p.inv[want];
        apply_swap(p, std::uint32_t(i), j);
        out.emplace_back(std::uint32_t(i), j);
    }
}

// Memetic polish is only worth its quadratic sweep on small instances; the
// swarm alone carries the search past this.
constexpr std::uint32_t kPolishMaxEpochs = 32;

// Steepest-descent over single transpositions until no swap improves; ties
// resolve to the first (i, j) in scan order. Deterministic.
template <typename CostFn>
void descend(std::vector<std::uint32_t>& order, std::uint64_t& cost, const CostFn& cost_of) {
    const std::uint32_t E = std::uint32_t(order.size());
    for (;;) {
        std::uint64_t best_cost = cost;
        std::uint32_t best_i = 0, best_j = 0;
        for (std::uint32_t i = 0; i + 1 < E; ++i) {
            for (std::uint32_t j = i + 1; j < E; ++j) {
                std::swap(order[i], order[j]);
                const std::uint64_t c = cost_of(order);
                std::swap(order[i], order[j]);
                if (c < best_cost) {
                    best_cost = c;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        if (best_cost == cost) return;
        std::swap(order[best_i], order[best_j]);
        cost = best_cost;
    }
}

} // namespace

PsoResult pso_order(const ReuseGraph& graph, const PsoParams& params) {
    const std::uint32_t E = graph.num_epochs;
    if (E == 0) throw ValidationError("pso_order: empty graph");
    if (params.swarm_size == 0) throw ValidationError("pso_order: swarm_size must be >= 1");
    if (params.inertia < 0.0 || params.inertia >= 1.0)
        throw ValidationError("pso_order: inertia must be in [0, 1)");
    if (params.kick < 0.0 || params.kick > 1.0)
        throw ValidationError("pso_order: kick must be in [0, 1]");

    SplitMix64 rng(params.seed);
    auto cost_of = [&graph](const std::vector<std::uint32_t>& order) {
        std::uint64_t c = 0;
        for (std::size_t i = 0; i + 1 < order.size(); ++i) c += graph.weight(order[i], order[i + 1]);
        return c;
    };

    // Adopting a personal best first polishes the position to its
    // transposition-local optimum (on instances small enough to afford it).
    const bool polish = E <= kPolishMaxEpochs;
    auto adopt_best = [&](Particle& part) {
        if (polish) {
            descend(part.pos, part.cost, cost_of);
            for (std::uint32_t i = 0; i < E; ++i) part.inv[part.pos[i]] = i;
        }
        part.best = part.pos;
        part.best_cost = part.cost;
        part.stale = 0;
    };

    std::vector<Particle> swarm(params.swarm_size);
    for (std::uint32_t p = 0; p < params.swarm_size; ++p) {
        Particle& part = swarm[p];
        part.pos.resize(E);
        std::iota(part.pos.begin(), part.pos.end(), 0u);
        if (p != 0) fisher_yates_shuffle(part.pos, rng); // particle 0 stays the identity
        part.inv.resize(E);
        for (std::uint32_t i = 0; i < E; ++i) part.inv[part.pos[i]] = i;
        part.cost = cost_of(part.pos);
        adopt_best(part);
    }

    // Global best: scan in particle order, strict improvement only, so cost
    // ties always resolve to the earliest particle.
    EpochOrder gbest{swarm[0].pos, swarm[0].cost};
    for (const Particle& part : swarm)
        if (part.cost < gbest.cost) gbest = {part.pos, part.cost};

    PsoResult result;
    result.history.reserve(params.max_iters);
    std::uint32_t stagnant = 0;
    std::vector<Swap> next_vel;
    for (std::uint32_t iter = 0; iter < params.max_iters; ++iter) {
        const std::vector<std::uint32_t> gbest_pos = gbest.order; // synchronous iteration
        bool improved = false;
        for (Particle& part : swarm) {
            if (params.restart_limit > 0 && part.stale >= params.restart_limit) {
                fisher_yates_shuffle(part.pos, rng); // reseed a stalled particle
                for (std::uint32_t i = 0; i < E; ++i) part.inv[part.pos[i]] = i;
                part.vel.clear();
                part.cost = cost_of(part.pos);
                adopt_best(part);
                continue;
            }
            next_vel.clear();
            for (const Swap& s : part.vel) { // momentum: replay part of last velocity
                if (rng.next_double() >= params.inertia) continue;
                apply_swap(part, s.first, s.second);
                next_vel.push_back(s);
            }
            pull_toward(part, part.best, params.p_personal, rng, next_vel);
            pull_toward(part, gbest_pos, params.p_global, rng, next_vel);
            if (E > 1 && rng.next_double() < params.kick) { // turbulence
                const std::uint32_t i = std::uint32_t(rng.next_below(E));
                std::uint32_t j = std::uint32_t(rng.next_below(E - 1));
                if (j >= i) ++j;
                apply_swap(part, i, j);
                next_vel.emplace_back(i, j);
            }
            part.vel = next_vel;
            part.cost = cost_of(part.pos);
            if (part.cost < part.best_cost) {
                adopt_best(part);
            } else {
                ++part.stale;
            }
        }
        for (const Particle& part : swarm) {
            if (part.best_cost < gbest.cost) {
                gbest = {part.best, part.best_cost};
                improved = true;
            }
        }
        result.history.push_back(gbest.cost);
        ++result.iterations;
        stagnant = improved ? 0 : stagnant + 1;
        if (stagnant >= params.stagnation_limit) break;
    }

    result.best = std::move(gbest);
    return result;
}

} // namespace loadsched
