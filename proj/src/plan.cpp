#include "loadsched/plan.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "loadsched/errors.hpp"

namespace loadsched {

std::vector<std::uint64_t> StepAssignment::fetch_counts() const {
    std::vector<std::uint64_t> counts(nodes.size(), 0);
    for (std::size_t k = 0; k < nodes.size(); ++k)
        for (const Assigned& a : nodes[k])
            if (a.source == Source::PfsFetch) ++counts[k];
    return counts;
}

std::vector<SampleId> StepAssignment::fetch_ids(std::uint32_t node) const {
    std::vector<SampleId> ids;
    for (const Assigned& a : nodes[node])
        if (a.source == Source::PfsFetch) ids.push_back(a.id);
    return ids;
}

std::uint64_t StepAssignment::total_assigned() const {
    std::uint64_t n = 0;
    for (const auto& list : nodes) n += list.size();
    return n;
}

bool same_multiset(const StepAssignment& step, const std::vector<SampleId>& batch) {
    std::vector<SampleId> got;
    got.reserve(batch.size());
    for (const auto& list : step.nodes)
        for (const Assigned& a : list) got.push_back(a.id);
    if (got.size() != batch.size()) return false;
    std::vector<SampleId> want = batch;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    return got == want;
}

void write_plan(std::ostream& out, const SchedulePlan& plan) {
    out << "loadsched-plan 1\n";
    out << "meta dataset_size=" << plan.dataset_size << " nodes=" << plan.num_nodes
        << " local_batch=" << plan.local_batch << " threshold=" << plan.chunk_threshold << "\n";
    out << "order:";
    for (std::uint32_t e : plan.order.order) out << ' ' << e;
    out << "\n";
    out << "cost: " << plan.order.cost << "\n";
    for (const EpochPlan& epoch : plan.epochs) {
        for (std::size_t t = 0; t < epoch.steps.size(); ++t) {
            const StepPlan& step = epoch.steps[t];
            for (std::uint32_t k = 0; k < plan.num_nodes; ++k)
                out << "balance " << epoch.epoch << ' ' << t << ' ' << k << ' '
                    << step.fetches_before[k] << ' ' << step.fetches_after[k] << "\n";
            for (std::uint32_t k = 0; k < plan.num_nodes; ++k)
                for (const Assigned& a : step.assignment.nodes[k])
                    out << "assign " << epoch.epoch << ' ' << t << ' ' << k << ' ' << a.id << ' '
                        << (a.source == Source::BufferHit ? "hit" : "fetch") << "\n";
            for (std::uint32_t k = 0; k < plan.num_nodes; ++k)
                for (const Read& read : step.reads[k].reads)
                    out << "read " << epoch.epoch << ' ' << t << ' ' << k << ' '
                        << (read.kind == Read::Kind::Single ? "single" : "chunk") << ' '
                        << read.start << ' ' << read.end << "\n";
        }
    }
}

namespace {

struct RowKey {
    std::uint32_t epoch = 0;
    std::uint64_t step = 0;
    std::uint32_t node = 0;
};

[[noreturn]] void bad_plan(const std::string& why) {
    throw ValidationError("plan file: " + why);
}

} // namespace

SchedulePlan read_plan(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "loadsched-plan 1")
        bad_plan("missing 'loadsched-plan 1' header");

    SchedulePlan plan;
    bool have_meta = false, have_order = false, have_cost = false;
    // epoch id -> position in plan.epochs
    std::vector<std::int64_t> epoch_pos;
    auto epoch_slot = [&](std::uint32_t epoch) -> EpochPlan& {
        if (epoch >= epoch_pos.size()) epoch_pos.resize(epoch + 1, -1);
        if (epoch_pos[epoch] < 0) {
            epoch_pos[epoch] = std::int64_t(plan.epochs.size());
            plan.epochs.push_back(EpochPlan{epoch, {}});
        }
        return plan.epochs[std::size_t(epoch_pos[epoch])];
    };
    auto step_slot = [&](const RowKey& key) -> StepPlan& {
        EpochPlan& epoch = epoch_slot(key.epoch);
        if (key.step >= epoch.steps.size()) {
            std::size_t old = epoch.steps.size();
            epoch.steps.resize(key.step + 1);
            for (std::size_t t = old; t < epoch.steps.size(); ++t) {
                epoch.steps[t].assignment.nodes.resize(plan.num_nodes);
                epoch.steps[t].fetches_before.assign(plan.num_nodes, 0);
                epoch.steps[t].fetches_after.assign(plan.num_nodes, 0);
                epoch.steps[t].reads.resize(plan.num_nodes);
            }
        }
        return epoch.steps[key.step];
    };

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string tag;
        row >> tag;
        if (tag == "meta") {
            std::string kv;
            while (row >> kv) {
                std::size_t eq = kv.find('=');
                if (eq == std::string::npos) bad_plan("meta entry without '=': " + kv);
                const std::string key = kv.substr(0, eq);
                const std::uint64_t value = std::stoull(kv.substr(eq + 1));
                if (key == "dataset_size") plan.dataset_size = value;
                else if (key == "nodes") plan.num_nodes = std::uint32_t(value);
                else if (key == "local_batch") plan.local_batch = value;
                else if (key == "threshold") plan.chunk_threshold = value;
                else bad_plan("unknown meta key: " + key);
            }
            if (plan.num_nodes == 0) bad_plan("meta missing nodes");
            have_meta = true;
        } else if (tag == "order:") {
            std::uint32_t e;
            while (row >> e) plan.order.order.push_back(e);
            have_order = true;
        } else if (tag == "cost:") {
            if (!(row >> plan.order.cost)) bad_plan("bad cost line");
            have_cost = true;
        } else if (tag == "balance") {
            if (!have_meta) bad_plan("balance row before meta");
            RowKey key;
            std::uint64_t before = 0, after = 0;
            if (!(row >> key.epoch >> key.step >> key.node >> before >> after))
                bad_plan("bad balance row");
            if (key.node >= plan.num_nodes) bad_plan("balance row node out of range");
            StepPlan& step = step_slot(key);
            step.fetches_before[key.node] = before;
            step.fetches_after[key.node] = after;
        } else if (tag == "assign") {
            if (!have_meta) bad_plan("assign row before meta");
            RowKey key;
            SampleId id = 0;
            std::string source;
            if (!(row >> key.epoch >> key.step >> key.node >> id >> source))
                bad_plan("bad assign row");
            if (key.node >= plan.num_nodes) bad_plan("assign row node out of range");
            if (source != "hit" && source != "fetch") bad_plan("bad source tag: " + source);
            step_slot(key).assignment.nodes[key.node].push_back(
                {id, source == "hit" ? Source::BufferHit : Source::PfsFetch});
        } else if (tag == "read") {
            if (!have_meta) bad_plan("read row before meta");
            RowKey key;
            std::string kind;
            SampleId start = 0, end = 0;
            if (!(row >> key.epoch >> key.step >> key.node >> kind >> start >> end))
                bad_plan("bad read row");
            if (key.node >= plan.num_nodes) bad_plan("read row node out of range");
            if (kind != "single" && kind != "chunk") bad_plan("bad read kind: " + kind);
            if (end < start) bad_plan("read row end < start");
            StepPlan& step = step_slot(key);
            ChunkPlan& reads = step.reads[key.node];
            reads.reads.push_back(
                {kind == "single" ? Read::Kind::Single : Read::Kind::Chunk, start, end});
        } else {
            bad_plan("unknown row tag: " + tag);
        }
    }
    if (!have_meta || !have_order || !have_cost) bad_plan("missing meta/order/cost");

    // Re-derive per-plan read statistics (needed/redundant) from the rows.
    for (EpochPlan& epoch : plan.epochs) {
        for (StepPlan& step : epoch.steps) {
            for (std::uint32_t k = 0; k < plan.num_nodes; ++k) {
                ChunkPlan& reads = step.reads[k];
                const std::vector<SampleId> fetch = step.assignment.fetch_ids(k);
                reads.needed = fetch.size();
                reads.redundant = 0;
                for (const Read& read : reads.reads)
                    if (read.kind == Read::Kind::Chunk) reads.redundant += read.span();
                std::uint64_t chunk_needed = 0;
                std::vector<SampleId> sorted = fetch;
                std::sort(sorted.begin(), sorted.end());
                for (const Read& read : reads.reads)
                    if (read.kind == Read::Kind::Chunk)
                        for (SampleId id : sorted)
                            if (id >= read.start && id <= read.end) ++chunk_needed;
                if (reads.redundant < chunk_needed) bad_plan("read rows inconsistent with fetches");
                reads.redundant -= chunk_needed;
            }
        }
    }

    // Execution order of epochs in the file must match the order line.
    if (plan.order.order.size() != plan.epochs.size()) bad_plan("order length != epoch count");
    for (std::size_t i = 0; i < plan.epochs.size(); ++i)
        if (plan.epochs[i].epoch != plan.order.order[i])
            bad_plan("epoch rows out of schedule order");
    return plan;
}

void write_plan_file(const std::string& path, const SchedulePlan& plan) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw StorageError("cannot open for writing: " + path);
    write_plan(out, plan);
    if (!out) throw StorageError("write failed: " + path);
}

SchedulePlan read_plan_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StorageError("cannot open for reading: " + path);
    return read_plan(in);
}

} // namespace loadsched
