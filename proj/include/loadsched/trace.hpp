#ifndef LOADSCHED_TRACE_HPP
#define LOADSCHED_TRACE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace loadsched {

using SampleId = std::uint64_t;

// Shape of one training run: a dataset of D samples read by N nodes, each
// consuming a local batch of b samples per step, for E epochs.
struct TraceConfig {
    std::uint64_t dataset_size = 0; // D
    std::uint32_t num_epochs = 0;   // E
    std::uint32_t num_nodes = 0;    // N
    std::uint64_t local_batch = 0;  // b
    std::uint64_t seed = 0;
    bool drop_last = true;

    std::uint64_t global_batch() const { return std::uint64_t(num_nodes) * local_batch; }
    // Steps per epoch: floor(D/B) when the ragged tail is dropped, else ceil.
    std::uint64_t steps_per_epoch() const;
    void validate() const; // throws ConfigError
};

// The full ahead-of-time access list: one shuffled id sequence per epoch.
// Regeneration from the same config is byte-identical: epoch e is the
// Fisher-Yates shuffle of [0, D) driven by splitmix64 seeded with
// seed XOR golden_gamma*(e+1), truncated to S*B entries when drop_last.
struct AccessTrace {
    TraceConfig config;
    std::vector<std::vector<SampleId>> epochs;

    std::uint64_t epoch_length() const { return epochs.empty() ? 0 : epochs.front().size(); }
};

AccessTrace generate_trace(const TraceConfig& config);

// Entries [step*B + node*b, step*B + (node+1)*b) of the epoch sequence,
// clamped to the sequence end for a ragged final step.
std::vector<SampleId> slice(const AccessTrace& trace, std::uint32_t epoch, std::uint64_t step,
                            std::uint32_t node);

// The global batch of one step: entries [step*B, (step+1)*B), clamped.
std::vector<SampleId> global_batch(const AccessTrace& trace, std::uint32_t epoch,
                                   std::uint64_t step);

// Plain-text export: "loadsched-trace 1" magic, config key=value lines, then
// per epoch a header line "epoch <e>" followed by one decimal id per line.
void write_trace(std::ostream& out, const AccessTrace& trace);
AccessTrace read_trace(std::istream& in); // throws ValidationError on malformed input

void write_trace_file(const std::string& path, const AccessTrace& trace);
AccessTrace read_trace_file(const std::string& path);

} // namespace loadsched

#endif
