#ifndef LOADSCHED_EPOCH_ORDER_HPP
#define LOADSCHED_EPOCH_ORDER_HPP

#include <cstdint>
#include <vector>

#include "loadsched/reuse_graph.hpp"

namespace loadsched {

// An execution order over epochs (open path: no edge back to the start) and
// its total transition weight under a reuse graph.
struct EpochOrder {
    std::vector<std::uint32_t> order;
    std::uint64_t cost = 0;
};

struct PsoParams {
    std::uint32_t swarm_size = 32;
    std::uint32_t max_iters = 500;
    double p_personal = 0.5; // per-element pull probability toward personal best
    double p_global = 0.5;   // per-element pull probability toward global best
    double inertia = 0.5;    // per-swap carry-over probability of last velocity
    double kick = 1.0;       // per-iteration random-transposition probability
    std::uint32_t stagnation_limit = 100;
    std::uint32_t restart_limit = 20; // reseed a particle after this many
                                      // non-improving iterations (0 disables)
    std::uint64_t seed = 0;
};

// Sum of weight(order[i], order[i+1]); throws ValidationError if `order` is
// not a permutation of [0, E).
std::uint64_t path_cost(const ReuseGraph& graph, const std::vector<std::uint32_t>& order);

// Exact minimum by lexicographic enumeration of all E! open paths; ties
// resolve to the lexicographically smallest order. Guarded: E <= 10
// (CapabilityError beyond).
EpochOrder brute_force_order(const ReuseGraph& graph);

struct PsoResult {
    EpochOrder best;
    std::vector<std::uint64_t> history; // global-best cost after each iteration
    std::uint32_t iterations = 0;       // iterations actually run
};

// Swap-sequence particle swarm over permutations. Positions are permutations
// and velocities are transposition lists. Each iteration a particle replays a
// random subset of its previous velocity (each swap kept with probability
// `inertia`), then is pulled element-by-element toward its personal best with
// probability p_personal and toward the global best with probability p_global
// (each pull is one transposition), and finally takes one uniform random
// transposition with probability `kick` so the swarm keeps exploring after it
// converges. A particle whose personal best stalls for restart_limit
// iterations is reseeded at a fresh random permutation (its personal best
// resets with it; the global best is never lost), which keeps the swarm
// behaving like a sustained multi-start search on small instances. The
// identity order is injected as particle 0, so the result never costs more
// than the unoptimized order. Deterministic given (graph, params); stops
// after max_iters or stagnation_limit non-improving iterations.
PsoResult pso_order(const ReuseGraph& graph, const PsoParams& params);

// Convenience: the identity order with its cost.
EpochOrder identity_order(const ReuseGraph& graph);

} // namespace loadsched

#endif
