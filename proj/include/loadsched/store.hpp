#ifndef LOADSCHED_STORE_HPP
#define LOADSCHED_STORE_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "loadsched/cost_model.hpp"

namespace loadsched {

// On-disk layout (little-endian): magic "SLRD", version u16 (= 1),
// sample_count u64, sample_size u64, then count*size payload bytes laid out
// contiguously. Creation fills the payload from a splitmix64 stream, so the
// same (count, size, fill_seed) always produces a byte-identical file.
struct StoreHeader {
    std::uint16_t version = 1;
    std::uint64_t sample_count = 0;
    std::uint64_t sample_size = 0;
};

inline constexpr std::size_t kStoreHeaderBytes = 4 + 2 + 8 + 8;
inline constexpr std::uint64_t kDefaultStoreBudget = 1ULL << 30; // 1 GiB

void create_store(const std::string& path, std::uint64_t sample_count, std::uint64_t sample_size,
                  std::uint64_t fill_seed, std::uint64_t max_bytes = kDefaultStoreBudget);

// Read-only handle; safe for concurrent reads (positional I/O, no shared
// cursor). Open validates magic, version and exact file length.
class Store {
  public:
    explicit Store(const std::string& path);
    ~Store();
    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    const StoreHeader& header() const { return header_; }
    std::uint64_t sample_count() const { return header_.sample_count; }
    std::uint64_t sample_size() const { return header_.sample_size; }

    std::vector<std::byte> read_one(std::uint64_t index) const;
    // One contiguous read of `count` samples starting at `start`.
    std::vector<std::byte> read_chunk(std::uint64_t start, std::uint64_t count) const;

  private:
    void read_at(void* dst, std::size_t bytes, std::uint64_t offset) const;
    int fd_ = -1;
    StoreHeader header_;
};

// One issued read during a benchmark run.
struct BenchRead {
    std::uint32_t proc = 0;
    std::uint64_t offset = 0; // absolute file offset
    std::uint64_t bytes = 0;
};

struct BenchResult {
    AccessPattern pattern = AccessPattern::Random;
    std::uint32_t procs = 0;
    double seconds = 0.0;
    std::vector<BenchRead> reads; // in issue order
};

// Replay one access pattern over the whole store with `procs` simulated
// processes (run back to back; wall time sums their work):
//   Random:           each proc reads its share of a seeded global shuffle
//   SequentialStride: proc p reads samples p, p+P, p+2P, ...
//   ChunkCycle:       proc p reads its contiguous shard one sample at a time
//   FullChunk:        proc p reads its whole shard in one chunk read
// sample_count must be divisible by procs for the chunked patterns.
BenchResult bench_pattern(const Store& store, AccessPattern pattern, std::uint32_t procs,
                          std::uint64_t seed);

std::vector<BenchResult> bench_all_patterns(const Store& store, std::uint32_t procs,
                                            std::uint64_t seed);

const char* pattern_name(AccessPattern pattern);

} // namespace loadsched

#endif
