#ifndef LOADSCHED_CHUNKING_HPP
#define LOADSCHED_CHUNKING_HPP

#include <cstdint>
#include <vector>

#include "loadsched/trace.hpp"

namespace loadsched {

// One parallel-filesystem read: either a single sample or a contiguous chunk
// of samples [start, end] (inclusive) that may cover unneeded ids in between.
struct Read {
    enum class Kind { Single, Chunk };
    Kind kind = Kind::Single;
    SampleId start = 0;
    SampleId end = 0;

    std::uint64_t span() const { return end - start + 1; }
    friend bool operator==(const Read&, const Read&) = default;
};

struct ChunkPlan {
    std::vector<Read> reads;
    std::uint64_t needed = 0;    // distinct requested ids covered
    std::uint64_t redundant = 0; // extra ids streamed inside chunks
};

// Greedy aggregation of a fetch set into reads: sort the ids, open a chunk at
// the first uncovered id, and extend while the span (next - start + 1) stays
// within `threshold`; runs of one id stay Single reads. threshold >= 1.
ChunkPlan plan_chunks(const std::vector<SampleId>& fetch_ids, std::uint64_t threshold);

// Ids streamed by chunks of `plan` but absent from the request, ascending.
std::vector<SampleId> redundant_ids(const ChunkPlan& plan, const std::vector<SampleId>& fetch_ids);

// Percentage of needed samples covered by multi-sample Chunk reads.
double chunked_fraction(const ChunkPlan& plan);
double chunked_fraction(const std::vector<ChunkPlan>& plans);

} // namespace loadsched

#endif
