#ifndef LOADSCHED_COST_MODEL_HPP
#define LOADSCHED_COST_MODEL_HPP

#include <cstdint>

#include "loadsched/chunking.hpp"

namespace loadsched {

// Two-parameter linear read model: every read pays one positioning cost
// (seek_cost) plus span * stream_cost for the bytes streamed. Values are
// decimal seconds per read / per sample.
struct CostModel {
    double seek_cost = 13.0;
    double stream_cost = 1.0;
};

// Defaults match the measured behavior that strided access pays ~0.4 of a
// full seek per sample and chunk-local cycling ~0.15.
struct PatternFactors {
    double stride_seek_factor = 0.4;
    double cycle_seek_factor = 0.15;
};

// Sum over reads of seek_cost + span * stream_cost.
double read_cost(const ChunkPlan& plan, const CostModel& model);
double read_cost(const std::vector<Read>& reads, const CostModel& model);

enum class AccessPattern { Random, SequentialStride, ChunkCycle, FullChunk };

// Closed-form wall time for `procs` processes reading `total` samples in
// parallel (each handles n = ceil(total/procs)):
//   Random:           n * (seek + stream)         full seek every sample
//   SequentialStride: n * (0.4 * seek + stream)   partial seek per stride
//   ChunkCycle:       n * (0.15 * seek + stream)  near-local repositioning
//   FullChunk:        seek + n * stream           one seek, then streaming
double pattern_cost(AccessPattern pattern, std::uint64_t total, std::uint32_t procs,
                    const CostModel& model, const PatternFactors& factors = {});

// Fit (seek, stream) so the model reproduces a measured random-access time and
// a measured full-chunk time exactly, with n = total/procs samples per proc:
//   random     = n * (seek + stream)
//   full_chunk = seek + n * stream
// Throws CalibrationError when the pair admits no non-negative solution.
// Degenerate n = 1 accepts only random == full_chunk and pins seek = 0.
CostModel calibrate(double random_seconds, double full_chunk_seconds, std::uint64_t total,
                    std::uint32_t procs);

// Largest chunk span whose single read costs no more than two separate reads
// of its endpoint samples: floor(seek/stream + 2). Capped at `max_threshold`
// (pass the dataset size); a free stream (stream_cost = 0) hits the cap.
std::uint64_t derive_threshold(const CostModel& model, std::uint64_t max_threshold);

} // namespace loadsched

#endif
