#include "loadsched/chunking.hpp"

#include <algorithm>

#include "loadsched/errors.hpp"

namespace loadsched {

ChunkPlan plan_chunks(const std::vector<SampleId>& fetch_ids, std::uint64_t threshold) {
    if (threshold == 0) throw ValidationError("plan_chunks: threshold must be >= 1");
    std::vector<SampleId> ids = fetch_ids;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    ChunkPlan plan;
    plan.needed = ids.size();
    std::size_t i = 0;
    while (i < ids.size()) {
        const SampleId start = ids[i];
        std::size_t j = i + 1;
        while (j < ids.size() && ids[j] - start + 1 <= threshold) ++j;
        const std::size_t count = j - i;
        if (count == 1) {
            plan.reads.push_back({Read::Kind::Single, start, start});
        } else {
            const SampleId end = ids[j - 1];
            plan.reads.push_back({Read::Kind::Chunk, start, end});
            plan.redundant += (end - start + 1) - count;
        }
        i = j;
    }
    return plan;
}

std::vector<SampleId> redundant_ids(const ChunkPlan& plan, const std::vector<SampleId>& fetch_ids) {
    std::vector<SampleId> needed = fetch_ids;
    std::sort(needed.begin(), needed.end());
    std::vector<SampleId> out;
    for (const Read& read : plan.reads) {
        if (read.kind != Read::Kind::Chunk) continue;
        for (SampleId id = read.start; id <= read.end; ++id)
            if (!std::binary_search(needed.begin(), needed.end(), id)) out.push_back(id);
    }
    return out;
}

namespace {

void tally(const ChunkPlan& plan, std::uint64_t& in_chunks, std::uint64_t& total) {
    total += plan.needed;
    for (const Read& read : plan.reads)
        if (read.kind == Read::Kind::Chunk) in_chunks += read.span();
    // span counts redundant ids too; subtract them once per plan
    in_chunks -= plan.redundant;
}

} // namespace

double chunked_fraction(const ChunkPlan& plan) {
    std::uint64_t in_chunks = 0, total = 0;
    tally(plan, in_chunks, total);
    return total == 0 ? 0.0 : 100.0 * double(in_chunks) / double(total);
}

double chunked_fraction(const std::vector<ChunkPlan>& plans) {
    std::uint64_t in_chunks = 0, total = 0;
    for (const ChunkPlan& plan : plans) tally(plan, in_chunks, total);
    return total == 0 ? 0.0 : 100.0 * double(in_chunks) / double(total);
}

} // namespace loadsched
