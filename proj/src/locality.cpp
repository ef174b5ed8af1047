#include "loadsched/locality.hpp"

#include "loadsched/errors.hpp"

namespace loadsched {

StepAssignment remap_step(const std::vector<const IdSet*>& buffers,
                          const std::vector<SampleId>& batch, std::uint64_t local_batch) {
    const std::size_t N = buffers.size();
    if (N == 0) throw ValidationError("remap_step: no nodes");
    if (local_batch == 0) throw ValidationError("remap_step: local_batch must be >= 1");
    if (batch.size() > N * local_batch)
        throw ValidationError("remap_step: batch larger than N * local_batch");

    StepAssignment step;
    step.nodes.resize(N);
    std::vector<SampleId> fetches;
    fetches.reserve(batch.size());

    for (SampleId id : batch) {
        std::size_t chosen = N;
        for (std::size_t k = 0; k < N; ++k) {
            if (step.nodes[k].size() >= local_batch) continue;
            if (!buffers[k]->contains(id)) continue;
            if (chosen == N || step.nodes[k].size() < step.nodes[chosen].size()) chosen = k;
        }
        if (chosen == N) {
            fetches.push_back(id);
        } else {
            step.nodes[chosen].push_back({id, Source::BufferHit});
        }
    }
    // Fetch fill: ascending node id, each node up to its free capacity.
    std::size_t k = 0;
    for (SampleId id : fetches) {
        while (k < N && step.nodes[k].size() >= local_batch) ++k;
        if (k == N) throw InternalError("remap_step: ran out of capacity");
        step.nodes[k].push_back({id, Source::PfsFetch});
    }
    if (!same_multiset(step, batch)) throw InternalError("remap_step: assignment multiset mismatch");
    return step;
}

std::vector<StepAssignment> remap_epoch(const std::vector<IdSet>& prev_buffers,
                                        const std::vector<std::vector<SampleId>>& epoch_batches,
                                        std::uint64_t local_batch) {
    std::vector<const IdSet*> views;
    views.reserve(prev_buffers.size());
    for (const IdSet& s : prev_buffers) views.push_back(&s);
    std::vector<StepAssignment> out;
    out.reserve(epoch_batches.size());
    for (const std::vector<SampleId>& batch : epoch_batches)
        out.push_back(remap_step(views, batch, local_batch));
    return out;
}

StepAssignment slice_step(const std::vector<const IdSet*>& buffers,
                          const std::vector<SampleId>& batch, std::uint64_t local_batch) {
    const std::size_t N = buffers.size();
    if (N == 0) throw ValidationError("slice_step: no nodes");
    if (local_batch == 0) throw ValidationError("slice_step: local_batch must be >= 1");

    StepAssignment step;
    step.nodes.resize(N);
    for (std::size_t p = 0; p < batch.size(); ++p) {
        const std::size_t k = p / local_batch;
        if (k >= N) throw ValidationError("slice_step: batch larger than N * local_batch");
        const SampleId id = batch[p];
        step.nodes[k].push_back(
            {id, buffers[k]->contains(id) ? Source::BufferHit : Source::PfsFetch});
    }
    return step;
}

} // namespace loadsched
