#ifndef LOADSCHED_REUSE_GRAPH_HPP
#define LOADSCHED_REUSE_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_set>
#include <vector>

#include "loadsched/trace.hpp"

namespace loadsched {

// How buffer residency is accounted when sizing reuse windows.
enum class WindowMode {
    Global,  // all node buffers pooled: one window of buffer_size * N ids
    PerNode, // each node retains its own window of buffer_size ids
};

// Complete directed graph over epochs. weight(u, v) counts the samples needed
// at the start of epoch v that are absent from the buffered window at the end
// of epoch u, i.e. the loads incurred by scheduling v directly after u.
struct ReuseGraph {
    std::uint32_t num_epochs = 0;
    std::uint64_t buffer_size = 0; // per-node window, in samples
    WindowMode mode = WindowMode::Global;
    std::vector<std::uint64_t> weights; // row-major E x E, diagonal 0

    std::uint64_t weight(std::uint32_t u, std::uint32_t v) const {
        return weights[std::size_t(u) * num_epochs + v];
    }
    std::uint64_t& weight(std::uint32_t u, std::uint32_t v) {
        return weights[std::size_t(u) * num_epochs + v];
    }
};

using IdSet = std::unordered_set<SampleId>;

// The ids resident in a buffer of the given size at the end of an epoch:
// Global mode returns one pooled set (the last min(buffer_size*N, length)
// distinct ids of the epoch sequence); PerNode mode returns one set per node
// (the last min(buffer_size, node length) distinct ids of that node's
// concatenated slices). Windows count distinct ids.
std::vector<IdSet> last_buffer_window(const AccessTrace& trace, std::uint32_t epoch,
                                      std::uint64_t buffer_size, WindowMode mode);

// Symmetric: the ids a buffer would want resident at the start of an epoch.
std::vector<IdSet> first_buffer_window(const AccessTrace& trace, std::uint32_t epoch,
                                       std::uint64_t buffer_size, WindowMode mode);

// weight(u, v) = |First(v) \ Last(u)| (Global) or the sum over nodes of the
// per-node set differences (PerNode). buffer_size must be >= 1.
ReuseGraph build_reuse_graph(const AccessTrace& trace, std::uint64_t buffer_size, WindowMode mode);

// Plain-text export: first line E, then E rows of E space-separated counts.
void write_graph(std::ostream& out, const ReuseGraph& graph);
ReuseGraph read_graph(std::istream& in); // mode/buffer metadata not serialized

void write_graph_file(const std::string& path, const ReuseGraph& graph);
ReuseGraph read_graph_file(const std::string& path);

} // namespace loadsched

#endif
