#include "loadsched/trace.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include "loadsched/errors.hpp"
#include "loadsched/prng.hpp"

namespace loadsched {

std::uint64_t TraceConfig::steps_per_epoch() const {
    const std::uint64_t B = global_batch();
    if (B == 0) return 0;
    return drop_last ? dataset_size / B : (dataset_size + B - 1) / B;
}

void TraceConfig::validate() const {
    if (num_nodes == 0) throw ConfigError("num_nodes must be >= 1");
    if (local_batch == 0) throw ConfigError("local_batch must be >= 1");
    if (num_epochs == 0) throw ConfigError("num_epochs must be >= 1");
    if (dataset_size < global_batch())
        throw ConfigError("dataset_size must be >= num_nodes * local_batch");
}

AccessTrace generate_trace(const TraceConfig& config) {
    config.validate();
    const std::uint64_t keep =
        config.drop_last ? config.steps_per_epoch() * config.global_batch() : config.dataset_size;

    AccessTrace trace;
    trace.config = config;
    trace.epochs.reserve(config.num_epochs);
    for (std::uint32_t e = 0; e < config.num_epochs; ++e) {
        SplitMix64 rng(config.seed ^ (kGoldenGamma * (std::uint64_t(e) + 1)));
        std::vector<SampleId> ids(config.dataset_size);
        std::iota(ids.begin(), ids.end(), SampleId{0});
        fisher_yates_shuffle(ids, rng);
        ids.resize(keep);
        trace.epochs.push_back(std::move(ids));
    }
    return trace;
}

std::vector<SampleId> slice(const AccessTrace& trace, std::uint32_t epoch, std::uint64_t step,
                            std::uint32_t node) {
    const TraceConfig& cfg = trace.config;
    if (epoch >= trace.epochs.size()) throw ValidationError("slice: epoch out of range");
    if (step >= cfg.steps_per_epoch()) throw ValidationError("slice: step out of range");
    if (node >= cfg.num_nodes) throw ValidationError("slice: node out of range");
    const std::vector<SampleId>& seq = trace.epochs[epoch];
    const std::uint64_t begin = step * cfg.global_batch() + std::uint64_t(node) * cfg.local_batch;
    const std::uint64_t end = begin + cfg.local_batch;
    const std::uint64_t lo = begin < seq.size() ? begin : seq.size();
    const std::uint64_t hi = end < seq.size() ? end : seq.size();
    return std::vector<SampleId>(seq.begin() + lo, seq.begin() + hi);
}

std::vector<SampleId> global_batch(const AccessTrace& trace, std::uint32_t epoch,
                                   std::uint64_t step) {
    const TraceConfig& cfg = trace.config;
    if (epoch >= trace.epochs.size()) throw ValidationError("global_batch: epoch out of range");
    if (step >= cfg.steps_per_epoch()) throw ValidationError("global_batch: step out of range");
    const std::vector<SampleId>& seq = trace.epochs[epoch];
    const std::uint64_t begin = step * cfg.global_batch();
    const std::uint64_t end = begin + cfg.global_batch();
    const std::uint64_t lo = begin < seq.size() ? begin : seq.size();
    const std::uint64_t hi = end < seq.size() ? end : seq.size();
    return std::vector<SampleId>(seq.begin() + lo, seq.begin() + hi);
}

void write_trace(std::ostream& out, const AccessTrace& trace) {
    out << "loadsched-trace 1\n";
    out << "dataset_size=" << trace.config.dataset_size << "\n";
    out << "num_epochs=" << trace.config.num_epochs << "\n";
    out << "num_nodes=" << trace.config.num_nodes << "\n";
    out << "local_batch=" << trace.config.local_batch << "\n";
    out << "seed=" << trace.config.seed << "\n";
    out << "drop_last=" << (trace.config.drop_last ? 1 : 0) << "\n";
    for (std::size_t e = 0; e < trace.epochs.size(); ++e) {
        out << "epoch " << e << "\n";
        for (SampleId id : trace.epochs[e]) out << id << "\n";
    }
}

namespace {

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        std::uint64_t value = std::stoull(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw ValidationError("trace file: bad integer for " + what + ": '" + text + "'");
    }
}

} // namespace

AccessTrace read_trace(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "loadsched-trace 1")
        throw ValidationError("trace file: missing 'loadsched-trace 1' header");

    AccessTrace trace;
    TraceConfig& cfg = trace.config;
    std::vector<SampleId>* current = nullptr;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("epoch ", 0) == 0) {
            std::uint64_t index = parse_u64(line.substr(6), "epoch header");
            if (index != trace.epochs.size())
                throw ValidationError("trace file: epoch headers out of order");
            trace.epochs.emplace_back();
            current = &trace.epochs.back();
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq != std::string::npos && current == nullptr) {
            const std::string key = line.substr(0, eq);
            const std::string value = line.substr(eq + 1);
            if (key == "dataset_size") cfg.dataset_size = parse_u64(value, key);
            else if (key == "num_epochs") cfg.num_epochs = std::uint32_t(parse_u64(value, key));
            else if (key == "num_nodes") cfg.num_nodes = std::uint32_t(parse_u64(value, key));
            else if (key == "local_batch") cfg.local_batch = parse_u64(value, key);
            else if (key == "seed") cfg.seed = parse_u64(value, key);
            else if (key == "drop_last") cfg.drop_last = parse_u64(value, key) != 0;
            else throw ValidationError("trace file: unknown key '" + key + "'");
            continue;
        }
        if (current == nullptr)
            throw ValidationError("trace file: sample id before first epoch header");
        current->push_back(parse_u64(line, "sample id"));
    }
    cfg.validate();
    if (trace.epochs.size() != cfg.num_epochs)
        throw ValidationError("trace file: epoch count does not match num_epochs");
    const std::uint64_t expect =
        cfg.drop_last ? cfg.steps_per_epoch() * cfg.global_batch() : cfg.dataset_size;
    for (const auto& seq : trace.epochs) {
        if (seq.size() != expect)
            throw ValidationError("trace file: epoch sequence length mismatch");
        for (SampleId id : seq)
            if (id >= cfg.dataset_size)
                throw ValidationError("trace file: sample id out of range");
    }
    return trace;
}

void write_trace_file(const std::string& path, const AccessTrace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw StorageError("cannot open for writing: " + path);
    write_trace(out, trace);
    if (!out) throw StorageError("write failed: " + path);
}

AccessTrace read_trace_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StorageError("cannot open for reading: " + path);
    return read_trace(in);
}

} // namespace loadsched
