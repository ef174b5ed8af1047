#include "loadsched/cost_model.hpp"

#include <cmath>

#include "loadsched/errors.hpp"

namespace loadsched {

double read_cost(const std::vector<Read>& reads, const CostModel& model) {
    double cost = 0.0;
    for (const Read& read : reads)
        cost += model.seek_cost + double(read.span()) * model.stream_cost;
    return cost;
}

double read_cost(const ChunkPlan& plan, const CostModel& model) {
    return read_cost(plan.reads, model);
}

double pattern_cost(AccessPattern pattern, std::uint64_t total, std::uint32_t procs,
                    const CostModel& model, const PatternFactors& factors) {
    if (procs == 0) throw ValidationError("pattern_cost: procs must be >= 1");
    if (total == 0) return 0.0;
    const double n = double((total + procs - 1) / procs);
    switch (pattern) {
        case AccessPattern::Random:
            return n * (model.seek_cost + model.stream_cost);
        case AccessPattern::SequentialStride:
            return n * (factors.stride_seek_factor * model.seek_cost + model.stream_cost);
        case AccessPattern::ChunkCycle:
            return n * (factors.cycle_seek_factor * model.seek_cost + model.stream_cost);
        case AccessPattern::FullChunk:
            return model.seek_cost + n * model.stream_cost;
    }
    throw ValidationError("pattern_cost: unknown pattern");
}

CostModel calibrate(double random_seconds, double full_chunk_seconds, std::uint64_t total,
                    std::uint32_t procs) {
    if (procs == 0) throw CalibrationError("calibrate: procs must be >= 1");
    if (total == 0 || total % procs != 0)
        throw CalibrationError("calibrate: total must be a positive multiple of procs");
    if (!(random_seconds > 0.0) || !(full_chunk_seconds > 0.0))
        throw CalibrationError("calibrate: measurements must be positive");

    const double n = double(total / procs);
    if (total / procs == 1) {
        // Both equations collapse to seek + stream = measurement; accept only a
        // consistent pair and pin the boundary solution seek = 0.
        if (random_seconds != full_chunk_seconds)
            throw CalibrationError("calibrate: total == procs requires equal measurements");
        return CostModel{0.0, random_seconds};
    }
    const double seek = (random_seconds - full_chunk_seconds) / (n - 1.0);
    const double stream = (full_chunk_seconds - seek) / n;
    if (seek < 0.0)
        throw CalibrationError("calibrate: random time below full-chunk time (negative seek)");
    if (stream < 0.0)
        throw CalibrationError(
            "calibrate: too few samples per proc for these measurements (negative stream)");
    return CostModel{seek, stream};
}

std::uint64_t derive_threshold(const CostModel& model, std::uint64_t max_threshold) {
    if (model.seek_cost < 0.0 || model.stream_cost < 0.0)
        throw ValidationError("derive_threshold: negative model parameters");
    if (model.stream_cost == 0.0) return max_threshold;
    const double bound = model.seek_cost / model.stream_cost + 2.0;
    if (bound >= double(max_threshold)) return max_threshold;
    return std::uint64_t(std::floor(bound));
}

} // namespace loadsched
