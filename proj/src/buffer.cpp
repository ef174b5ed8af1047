#include "loadsched/buffer.hpp"

#include <algorithm>
#include <bit>

#include "loadsched/errors.hpp"

namespace loadsched {

Buffer::Buffer(std::uint64_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw ValidationError("buffer capacity must be >= 1");
}

void ClairvoyantBuffer::put(SampleId id, std::uint64_t next_use) {
    next_[id] = next_use;
    heap_.emplace(next_use, id);
}

void ClairvoyantBuffer::evict_farthest() {
    while (!heap_.empty()) {
        auto [next_use, id] = heap_.top();
        auto it = next_.find(id);
        if (it == next_.end() || it->second != next_use) {
            heap_.pop(); // stale entry
            continue;
        }
        // Heap order on (next_use, id) gives farthest next use first and
        // resolves never-used-again ties toward the larger id.
        heap_.pop();
        next_.erase(it);
        resident_.erase(id);
        return;
    }
    throw InternalError("clairvoyant buffer: eviction with empty heap");
}

bool ClairvoyantBuffer::access(SampleId id, std::uint64_t next_use) {
    if (resident_.contains(id)) {
        put(id, next_use);
        return true;
    }
    resident_.insert(id);
    put(id, next_use);
    if (resident_.size() > capacity_) evict_farthest();
    return false;
}

void ClairvoyantBuffer::insert_silent(SampleId id, std::uint64_t next_use) {
    if (resident_.contains(id)) return;
    resident_.insert(id);
    put(id, next_use);
    if (resident_.size() > capacity_) evict_farthest();
}

void ClairvoyantBuffer::clear() {
    resident_.clear();
    next_.clear();
    heap_ = {};
}

void LruBuffer::touch_or_insert(SampleId id) {
    auto it = where_.find(id);
    if (it != where_.end()) {
        recency_.splice(recency_.begin(), recency_, it->second);
        return;
    }
    resident_.insert(id);
    recency_.push_front(id);
    where_[id] = recency_.begin();
    if (resident_.size() > capacity_) {
        const SampleId victim = recency_.back(); // least recently seen
        recency_.pop_back();
        where_.erase(victim);
        resident_.erase(victim);
    }
}

bool LruBuffer::access(SampleId id, std::uint64_t) {
    const bool hit = resident_.contains(id);
    touch_or_insert(id);
    return hit;
}

void LruBuffer::insert_silent(SampleId id, std::uint64_t) {
    // Arrives as the most recent entry, like any other newly loaded sample.
    touch_or_insert(id);
}

void LruBuffer::clear() {
    resident_.clear();
    recency_.clear();
    where_.clear();
}

std::unique_ptr<Buffer> make_buffer(Policy policy, std::uint64_t capacity) {
    if (policy == Policy::Clairvoyant) return std::make_unique<ClairvoyantBuffer>(capacity);
    return std::make_unique<LruBuffer>(capacity);
}

namespace {

// next_use[i] = index of the next access of seq[i], or kNeverUsed.
std::vector<std::uint64_t> next_use_chain(const std::vector<SampleId>& seq) {
    std::vector<std::uint64_t> next(seq.size(), kNeverUsed);
    std::unordered_map<SampleId, std::uint64_t> last;
    for (std::size_t i = seq.size(); i > 0; --i) {
        auto it = last.find(seq[i - 1]);
        if (it != last.end()) next[i - 1] = it->second;
        last[seq[i - 1]] = i - 1;
    }
    return next;
}

} // namespace

std::uint64_t simulate_sequence(const std::vector<SampleId>& seq, std::uint64_t capacity,
                                Policy policy) {
    auto buffer = make_buffer(policy, capacity);
    std::vector<std::uint64_t> next;
    if (policy == Policy::Clairvoyant) next = next_use_chain(seq);
    std::uint64_t misses = 0;
    for (std::size_t i = 0; i < seq.size(); ++i)
        if (!buffer->access(seq[i], policy == Policy::Clairvoyant ? next[i] : 0)) ++misses;
    return misses;
}

std::uint64_t optimal_miss_oracle(const std::vector<SampleId>& seq, std::uint64_t capacity) {
    OracleWorkspace ws;
    return optimal_miss_oracle(seq, capacity, ws);
}

std::uint64_t optimal_miss_oracle(const std::vector<SampleId>& seq, std::uint64_t capacity,
                                  OracleWorkspace& ws) {
    if (seq.size() > 16) throw CapabilityError("optimal_miss_oracle: guarded to length <= 16");
    if (capacity == 0 || capacity > 4)
        throw CapabilityError("optimal_miss_oracle: guarded to capacity in [1, 4]");

    // Relabel ids to 0..k-1 so resident sets fit in a bitmask.
    ws.labels.assign(seq.size(), 0);
    std::vector<SampleId> ids;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        auto it = std::find(ids.begin(), ids.end(), seq[i]);
        if (it == ids.end()) {
            ws.labels[i] = std::uint8_t(ids.size());
            ids.push_back(seq[i]);
        } else {
            ws.labels[i] = std::uint8_t(it - ids.begin());
        }
    }
    const std::size_t k = ids.size();
    const std::size_t masks = std::size_t(1) << k;
    ws.memo.assign((seq.size() + 1) * masks, -1);

    // f(pos, mask) = minimum future misses. On a miss the machine inserts,
    // then (iff over capacity) may evict any resident including the incoming.
    auto f = [&](auto&& self, std::size_t pos, std::uint32_t mask) -> std::int8_t {
        if (pos == seq.size()) return 0;
        std::int8_t& slot = ws.memo[pos * masks + mask];
        if (slot >= 0) return slot;
        const std::uint32_t bit = 1u << ws.labels[pos];
        std::int8_t best;
        if (mask & bit) {
            best = self(self, pos + 1, mask);
        } else {
            const std::uint32_t grown = mask | bit;
            if (std::uint64_t(std::popcount(grown)) <= capacity) {
                best = std::int8_t(1 + self(self, pos + 1, grown));
            } else {
                best = std::int8_t(seq.size() + 1);
                for (std::uint32_t victim = grown; victim;) {
                    const std::uint32_t low = victim & (~victim + 1);
                    best = std::min(best, std::int8_t(1 + self(self, pos + 1, grown & ~low)));
                    victim &= victim - 1;
                }
            }
        }
        slot = best;
        return best;
    };
    return std::uint64_t(f(f, 0, 0));
}

SimResult simulate_plan(const SchedulePlan& plan, std::uint64_t capacity, Policy policy,
                        bool insert_redundant) {
    const std::uint32_t N = plan.num_nodes;
    SimResult result;
    result.policy = policy;

    // Per node: flattened access sequence across the whole schedule, plus the
    // step boundaries so stats land on (epoch, step) rows.
    struct NodeSeq {
        std::vector<SampleId> seq;
        std::vector<std::uint64_t> next;
        std::unordered_map<SampleId, std::vector<std::uint64_t>> positions;
    };
    std::vector<NodeSeq> nodes(N);
    for (const EpochPlan& epoch : plan.epochs)
        for (const StepPlan& step : epoch.steps)
            for (std::uint32_t k = 0; k < N; ++k)
                for (const Assigned& a : step.assignment.nodes[k])
                    nodes[k].seq.push_back(a.id);
    for (NodeSeq& node : nodes) {
        node.next = next_use_chain(node.seq);
        if (insert_redundant)
            for (std::uint64_t i = 0; i < node.seq.size(); ++i)
                node.positions[node.seq[i]].push_back(i);
    }

    std::vector<std::unique_ptr<Buffer>> buffers;
    std::vector<std::uint64_t> cursor(N, 0);
    for (std::uint32_t k = 0; k < N; ++k) buffers.push_back(make_buffer(policy, capacity));

    for (const EpochPlan& epoch : plan.epochs) {
        for (std::size_t t = 0; t < epoch.steps.size(); ++t) {
            const StepPlan& step = epoch.steps[t];
            for (std::uint32_t k = 0; k < N; ++k) {
                StepNodeStats stats{epoch.epoch, t, k, 0, 0};
                NodeSeq& node = nodes[k];
                for (const Assigned& a : step.assignment.nodes[k]) {
                    const std::uint64_t pos = cursor[k]++;
                    if (node.seq[pos] != a.id)
                        throw InternalError("simulate_plan: sequence walk out of sync");
                    if (buffers[k]->access(a.id, node.next[pos])) ++stats.hits;
                    else ++stats.misses;
                }
                if (insert_redundant) {
                    const std::vector<SampleId> extra =
                        redundant_ids(step.reads[k], step.assignment.fetch_ids(k));
                    for (SampleId id : extra) {
                        std::uint64_t next = kNeverUsed;
                        auto it = node.positions.find(id);
                        if (it != node.positions.end()) {
                            auto up =
                                std::lower_bound(it->second.begin(), it->second.end(), cursor[k]);
                            if (up != it->second.end()) next = *up;
                        }
                        buffers[k]->insert_silent(id, next);
                    }
                }
                result.total_hits += stats.hits;
                result.total_misses += stats.misses;
                result.rows.push_back(stats);
            }
        }
    }
    return result;
}

} // namespace loadsched
