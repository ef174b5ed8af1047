#ifndef LOADSCHED_BUFFER_HPP
#define LOADSCHED_BUFFER_HPP

#include <cstdint>
#include <list>
#include <memory>
#include <queue>
#include <unordered_map>
#include <vector>

#include "loadsched/plan.hpp"
#include "loadsched/reuse_graph.hpp"

namespace loadsched {

enum class Policy { Clairvoyant, Lru };

// next-use value meaning "never accessed again".
inline constexpr std::uint64_t kNeverUsed = ~std::uint64_t{0};

// Fixed-capacity per-node sample buffer. An access refreshes a resident
// sample (hit) or inserts it (miss); when an insertion overflows capacity the
// policy picks a victim among all residents *including the just-inserted
// sample*, so the optimal policy may decline to keep a new sample (bypass).
class Buffer {
  public:
    explicit Buffer(std::uint64_t capacity); // capacity 0 is rejected
    virtual ~Buffer() = default;

    // `next_use` is the time of this sample's next access (kNeverUsed if
    // none); LRU ignores it. Returns true on hit.
    virtual bool access(SampleId id, std::uint64_t next_use) = 0;

    // Insertion without an access (opportunistic fill from chunk surplus);
    // counts neither hit nor miss, but may evict per policy.
    virtual void insert_silent(SampleId id, std::uint64_t next_use) = 0;

    virtual void clear() = 0;

    const IdSet& resident() const { return resident_; }
    std::uint64_t capacity() const { return capacity_; }

  protected:
    std::uint64_t capacity_;
    IdSet resident_;
};

// Offline-optimal eviction: on overflow drop the candidate with the farthest
// next use; never-used-again counts as infinitely far, such ties break toward
// the larger id. Implemented as a lazy max-heap keyed by (next_use, id).
class ClairvoyantBuffer : public Buffer {
  public:
    explicit ClairvoyantBuffer(std::uint64_t capacity) : Buffer(capacity) {}
    bool access(SampleId id, std::uint64_t next_use) override;
    void insert_silent(SampleId id, std::uint64_t next_use) override;
    void clear() override;

  private:
    void put(SampleId id, std::uint64_t next_use);
    void evict_farthest();
    std::unordered_map<SampleId, std::uint64_t> next_;
    // heap entries may be stale; validity = entry matches next_[id]
    std::priority_queue<std::pair<std::uint64_t, SampleId>> heap_;
};

class LruBuffer : public Buffer {
  public:
    explicit LruBuffer(std::uint64_t capacity) : Buffer(capacity) {}
    bool access(SampleId id, std::uint64_t next_use) override;
    void insert_silent(SampleId id, std::uint64_t next_use) override;
    void clear() override;

  private:
    void touch_or_insert(SampleId id);
    std::list<SampleId> recency_; // front = most recent
    std::unordered_map<SampleId, std::list<SampleId>::iterator> where_;
};

std::unique_ptr<Buffer> make_buffer(Policy policy, std::uint64_t capacity);

// Replay one access sequence through a single buffer; returns the miss count.
// Clairvoyant next-use values come from the sequence itself.
std::uint64_t simulate_sequence(const std::vector<SampleId>& seq, std::uint64_t capacity,
                                Policy policy);

// True minimum miss count over every eviction choice (including bypass) for
// the same machine model. Guarded: length <= 16, capacity in [1, 4].
std::uint64_t optimal_miss_oracle(const std::vector<SampleId>& seq, std::uint64_t capacity);

// Reusable scratch for tight oracle loops (avoids reallocation).
struct OracleWorkspace {
    std::vector<std::int8_t> memo;
    std::vector<std::uint8_t> labels;
};
std::uint64_t optimal_miss_oracle(const std::vector<SampleId>& seq, std::uint64_t capacity,
                                  OracleWorkspace& ws);

struct StepNodeStats {
    std::uint32_t epoch = 0;
    std::uint64_t step = 0;
    std::uint32_t node = 0;
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
};

struct SimResult {
    Policy policy = Policy::Clairvoyant;
    std::vector<StepNodeStats> rows; // execution order, nodes ascending
    std::uint64_t total_hits = 0;
    std::uint64_t total_misses = 0; // the numPFS metric
};

// Replay every node's assigned sequence (epochs in plan order, buffers stay
// warm across epochs) through its own buffer. With insert_redundant, ids
// streamed by chunk reads but not requested are inserted silently at the end
// of their step. Deterministic.
SimResult simulate_plan(const SchedulePlan& plan, std::uint64_t capacity, Policy policy,
                        bool insert_redundant = false);

} // namespace loadsched

#endif
