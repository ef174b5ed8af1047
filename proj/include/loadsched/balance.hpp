#ifndef LOADSCHED_BALANCE_HPP
#define LOADSCHED_BALANCE_HPP

#include <cstdint>
#include <vector>

#include "loadsched/cost_model.hpp"
#include "loadsched/plan.hpp"

namespace loadsched {

// Even out per-node fetch counts within one step. Repeatedly move one fetch —
// the numerically largest fetch id of the most-loaded node (ties: lowest node
// id) — to the least-loaded node (ties: lowest node id), appending it to the
// recipient's list, until max - min <= 1. Buffer hits never move, so every
// count lands in {floor(M/N), ceil(M/N)} and the step's multiset is unchanged.
// Returns the number of moves.
std::uint64_t balance_step(StepAssignment& step);

// Wall-clock proxy for the synchronous loading phase of one step: the slowest
// node's fetch cost, each fetch priced as a single read.
double barrier_time(const StepAssignment& step, const CostModel& model);

struct StepSizes {
    std::uint32_t epoch = 0;
    std::uint64_t step = 0;
    std::vector<std::uint64_t> sizes; // samples assigned per node
    double stddev = 0.0;              // population stddev across nodes
};

// Per-step local batch sizes after remapping/balancing, in execution order.
std::vector<StepSizes> batch_size_stats(const SchedulePlan& plan);

} // namespace loadsched

#endif
