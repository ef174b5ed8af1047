#ifndef LOADSCHED_CONFIG_HPP
#define LOADSCHED_CONFIG_HPP

#include <iosfwd>
#include <string>

#include "loadsched/buffer.hpp"
#include "loadsched/cost_model.hpp"
#include "loadsched/epoch_order.hpp"
#include "loadsched/reuse_graph.hpp"
#include "loadsched/trace.hpp"

namespace loadsched {

// Everything one run needs, loadable from a flat key=value file. Every random
// choice downstream (shuffles, swarm search) derives from trace.seed.
struct PipelineConfig {
    TraceConfig trace;
    std::uint64_t buffer_capacity = 0; // per node, samples
    Policy policy = Policy::Clairvoyant;
    WindowMode graph_mode = WindowMode::Global;
    std::uint64_t chunk_threshold = 15;
    bool chunk_insert_redundant = false;
    CostModel model{};
    PatternFactors factors{};
    PsoParams pso{}; // pso.seed is overwritten with trace.seed at run time

    // Optimization toggles: epoch reordering, node remapping, fetch
    // balancing, chunk aggregation. All on by default.
    bool optim_order = true;
    bool optim_remap = true;
    bool optim_balance = true;
    bool optim_chunk = true;

    void validate() const; // throws ConfigError
};

// Parse "key=value" lines; '#' starts a comment, blank lines are ignored.
// Unknown keys and malformed values raise ConfigError. Later lines override
// earlier ones.
PipelineConfig parse_config(std::istream& in);
PipelineConfig parse_config_file(const std::string& path);

// Apply one "key=value" assignment (the CLI uses this for --set overrides).
void apply_config_entry(PipelineConfig& config, const std::string& key, const std::string& value);

void write_config(std::ostream& out, const PipelineConfig& config);

const char* policy_name(Policy policy);
const char* mode_name(WindowMode mode);

} // namespace loadsched

#endif
