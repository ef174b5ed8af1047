#include "loadsched/reuse_graph.hpp"

#include <fstream>
#include <sstream>

#include "loadsched/errors.hpp"

namespace loadsched {

namespace {

// Distinct ids taken from the front (take_first) or back of a sequence until
// `want` distinct ids are collected or the sequence is exhausted.
IdSet distinct_window(const std::vector<SampleId>& seq, std::uint64_t want, bool take_first) {
    IdSet out;
    if (want == 0) return out;
    if (take_first) {
        for (SampleId id : seq) {
            out.insert(id);
            if (out.size() >= want) break;
        }
    } else {
        for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
            out.insert(*it);
            if (out.size() >= want) break;
        }
    }
    return out;
}

std::vector<SampleId> node_sequence(const AccessTrace& trace, std::uint32_t epoch,
                                    std::uint32_t node) {
    std::vector<SampleId> seq;
    const std::uint64_t steps = trace.config.steps_per_epoch();
    seq.reserve(steps * trace.config.local_batch);
    for (std::uint64_t t = 0; t < steps; ++t) {
        std::vector<SampleId> part = slice(trace, epoch, t, node);
        seq.insert(seq.end(), part.begin(), part.end());
    }
    return seq;
}

std::vector<IdSet> window(const AccessTrace& trace, std::uint32_t epoch, std::uint64_t buffer_size,
                          WindowMode mode, bool take_first) {
    if (epoch >= trace.epochs.size()) throw ValidationError("buffer window: epoch out of range");
    if (buffer_size == 0) throw ValidationError("buffer window: buffer_size must be >= 1");
    if (mode == WindowMode::Global) {
        const std::uint64_t pooled = buffer_size * trace.config.num_nodes;
        return {distinct_window(trace.epochs[epoch], pooled, take_first)};
    }
    std::vector<IdSet> out;
    out.reserve(trace.config.num_nodes);
    for (std::uint32_t k = 0; k < trace.config.num_nodes; ++k)
        out.push_back(distinct_window(node_sequence(trace, epoch, k), buffer_size, take_first));
    return out;
}

std::uint64_t set_difference_size(const IdSet& a, const IdSet& b) {
    std::uint64_t n = 0;
    for (SampleId id : a)
        if (!b.contains(id)) ++n;
    return n;
}

} // namespace

std::vector<IdSet> last_buffer_window(const AccessTrace& trace, std::uint32_t epoch,
                                      std::uint64_t buffer_size, WindowMode mode) {
    return window(trace, epoch, buffer_size, mode, /*take_first=*/false);
}

std::vector<IdSet> first_buffer_window(const AccessTrace& trace, std::uint32_t epoch,
                                       std::uint64_t buffer_size, WindowMode mode) {
    return window(trace, epoch, buffer_size, mode, /*take_first=*/true);
}

ReuseGraph build_reuse_graph(const AccessTrace& trace, std::uint64_t buffer_size, WindowMode mode) {
    if (buffer_size == 0) throw ValidationError("build_reuse_graph: buffer_size must be >= 1");
    const std::uint32_t E = std::uint32_t(trace.epochs.size());
    ReuseGraph graph;
    graph.num_epochs = E;
    graph.buffer_size = buffer_size;
    graph.mode = mode;
    graph.weights.assign(std::size_t(E) * E, 0);

    std::vector<std::vector<IdSet>> first(E), last(E);
    for (std::uint32_t e = 0; e < E; ++e) {
        first[e] = first_buffer_window(trace, e, buffer_size, mode);
        last[e] = last_buffer_window(trace, e, buffer_size, mode);
    }
    for (std::uint32_t u = 0; u < E; ++u) {
        for (std::uint32_t v = 0; v < E; ++v) {
            if (u == v) continue;
            std::uint64_t w = 0;
            for (std::size_t k = 0; k < first[v].size(); ++k)
                w += set_difference_size(first[v][k], last[u][k]);
            graph.weight(u, v) = w;
        }
    }
    return graph;
}

void write_graph(std::ostream& out, const ReuseGraph& graph) {
    out << graph.num_epochs << "\n";
    for (std::uint32_t u = 0; u < graph.num_epochs; ++u) {
        for (std::uint32_t v = 0; v < graph.num_epochs; ++v) {
            if (v) out << ' ';
            out << graph.weight(u, v);
        }
        out << "\n";
    }
}

ReuseGraph read_graph(std::istream& in) {
    ReuseGraph graph;
    std::uint64_t e = 0;
    if (!(in >> e) || e == 0) throw ValidationError("graph file: bad epoch count header");
    graph.num_epochs = std::uint32_t(e);
    graph.weights.assign(std::size_t(e) * e, 0);
    for (std::size_t i = 0; i < graph.weights.size(); ++i)
        if (!(in >> graph.weights[i]))
            throw ValidationError("graph file: truncated weight matrix");
    for (std::uint32_t u = 0; u < graph.num_epochs; ++u)
        if (graph.weight(u, u) != 0)
            throw ValidationError("graph file: nonzero diagonal");
    return graph;
}

void write_graph_file(const std::string& path, const ReuseGraph& graph) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw StorageError("cannot open for writing: " + path);
    write_graph(out, graph);
    if (!out) throw StorageError("write failed: " + path);
}

ReuseGraph read_graph_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StorageError("cannot open for reading: " + path);
    return read_graph(in);
}

} // namespace loadsched
