#ifndef LOADSCHED_PIPELINE_HPP
#define LOADSCHED_PIPELINE_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "loadsched/balance.hpp"
#include "loadsched/buffer.hpp"
#include "loadsched/config.hpp"
#include "loadsched/locality.hpp"
#include "loadsched/plan.hpp"

namespace loadsched {

// Offline scheduling result: the inputs that produced the plan plus the plan.
struct PlanOutput {
    AccessTrace trace;
    ReuseGraph graph;
    std::optional<PsoResult> pso; // engaged when epoch reordering ran
    SchedulePlan plan;
};

// trace -> reuse graph -> epoch order -> per-step remap/balance/chunking.
// Buffer snapshots advance step by step through the configured policy, with
// clairvoyant next-use taken at scheduled-step granularity (ties by id).
PlanOutput plan_schedule(const PipelineConfig& config);

// The comparison pass: original epoch order, slice partition, LRU, no
// balancing, no chunking.
PipelineConfig baseline_config(const PipelineConfig& config);

struct PassTotals {
    std::string name;
    std::uint64_t misses = 0;
    std::uint64_t hits = 0;
    double hit_rate = 0.0;     // percent
    double barrier_cost = 0.0; // sum over steps of max per-node singles cost
    double io_cost = 0.0;      // sum over steps of max per-node planned read cost
};

// Sum the per-step barrier / modeled read costs of a finished plan.
double total_barrier_cost(const SchedulePlan& plan, const CostModel& model);
double total_io_cost(const SchedulePlan& plan, const CostModel& model);

struct PipelineResult {
    PlanOutput output;
    SimResult sim;              // configured policy over the final plan
    SchedulePlan baseline_plan; // LRU comparison pass
    SimResult baseline_sim;
};

// Run the configured pass plus the baseline pass. When out_dir is non-empty,
// writes trace.txt, graph.txt, order.txt, plan.txt, metrics.csv,
// baseline_metrics.csv and summary.txt there (byte-stable for a fixed
// config).
PipelineResult run_pipeline(const PipelineConfig& config, const std::string& out_dir);

// metrics.csv: one row per (epoch, step, node) in execution order with the
// simulated hits/misses, per-node fetch counts before/after balancing and the
// step's singles-cost barrier before/after.
void write_metrics(std::ostream& out, const SchedulePlan& plan, const SimResult& sim,
                   const CostModel& model);

// Cumulative optimization ladder (each pass re-plans and re-simulates):
// baseline-lru, no-optim, +order+remap, +balance, +chunking.
std::vector<PassTotals> ablation_ladder(const PipelineConfig& config);

// Human-readable run summary: config echo, the ladder table with speedups
// relative to the baseline pass, chunked fraction, batch-size spread and the
// chosen epoch order.
std::string summary_text(const PipelineConfig& config);

} // namespace loadsched

#endif
