#ifndef LOADSCHED_LOCALITY_HPP
#define LOADSCHED_LOCALITY_HPP

#include <cstdint>
#include <vector>

#include "loadsched/plan.hpp"
#include "loadsched/reuse_graph.hpp"

namespace loadsched {

// Reassign one step's global batch to nodes so buffered samples stay where
// they reside. Scanning the batch in order:
//   - a sample held by some node goes to a holder with free capacity; with
//     several holders, the one with the fewest assignments wins (tie: lowest
//     node id); holders all full -> the sample becomes a fetch
//   - remaining samples become fetches and fill nodes to capacity b in
//     ascending node id (one round-robin cycle with quantum = free capacity),
//     which reproduces the original slice partition on a cold start
// Capacity overflow therefore keeps, per node, the b buffered samples with the
// earliest next use (their position in the step's batch) and fetches the rest.
// Every node list is capped at local_batch before balancing; the assigned
// multiset always equals the batch (InternalError otherwise).
StepAssignment remap_step(const std::vector<const IdSet*>& buffers,
                          const std::vector<SampleId>& batch, std::uint64_t local_batch);

// Whole-epoch form: every step is assigned against the same fixed residency
// snapshot (e.g. end-of-previous-epoch buffers). The pipeline instead calls
// remap_step with snapshots advanced through the buffer model step by step.
std::vector<StepAssignment> remap_epoch(const std::vector<IdSet>& prev_buffers,
                                        const std::vector<std::vector<SampleId>>& epoch_batches,
                                        std::uint64_t local_batch);

// The unoptimized mapping: node k takes batch positions [k*b, (k+1)*b),
// clamped; source tags still reflect residency in the given buffers.
StepAssignment slice_step(const std::vector<const IdSet*>& buffers,
                          const std::vector<SampleId>& batch, std::uint64_t local_batch);

} // namespace loadsched

#endif
