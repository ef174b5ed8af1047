#ifndef LOADSCHED_PLAN_HPP
#define LOADSCHED_PLAN_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "loadsched/chunking.hpp"
#include "loadsched/epoch_order.hpp"
#include "loadsched/trace.hpp"

namespace loadsched {

// Where a scheduled sample comes from: the node's reuse buffer or the PFS.
enum class Source { BufferHit, PfsFetch };

struct Assigned {
    SampleId id = 0;
    Source source = Source::PfsFetch;
    friend bool operator==(const Assigned&, const Assigned&) = default;
};

// One step's work: per node, the ordered list of samples it trains on.
struct StepAssignment {
    std::vector<std::vector<Assigned>> nodes;

    std::vector<std::uint64_t> fetch_counts() const;
    std::vector<SampleId> fetch_ids(std::uint32_t node) const;
    std::uint64_t total_assigned() const;
};

struct StepPlan {
    StepAssignment assignment;                 // final (post-balance) lists
    std::vector<std::uint64_t> fetches_before; // per node, before balancing
    std::vector<std::uint64_t> fetches_after;  // per node, after balancing
    std::vector<ChunkPlan> reads;              // per node read plan for its fetches
};

struct EpochPlan {
    std::uint32_t epoch = 0; // original epoch id
    std::vector<StepPlan> steps;
};

// The complete offline schedule, epochs listed in execution order.
struct SchedulePlan {
    std::uint64_t dataset_size = 0;
    std::uint32_t num_nodes = 0;
    std::uint64_t local_batch = 0;
    std::uint64_t chunk_threshold = 0; // 0 = aggregation disabled (singles only)
    EpochOrder order;
    std::vector<EpochPlan> epochs;
};

// Multiset equality between the step's assignment and the trace's batch; used
// to assert that remapping/balancing never change what a step trains on.
bool same_multiset(const StepAssignment& step, const std::vector<SampleId>& batch);

// Plain-text plan schema ("loadsched-plan 1"): a meta line, the order and cost
// lines, then per scheduled epoch/step: "balance <epoch> <step> <node>
// <fetches_before> <fetches_after>" rows, "assign <epoch> <step> <node> <id>
// hit|fetch" rows and "read <epoch> <step> <node> single|chunk <start> <end>"
// rows, nodes ascending, lists in execution order.
void write_plan(std::ostream& out, const SchedulePlan& plan);
SchedulePlan read_plan(std::istream& in);

void write_plan_file(const std::string& path, const SchedulePlan& plan);
SchedulePlan read_plan_file(const std::string& path);

} // namespace loadsched

#endif
