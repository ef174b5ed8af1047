#include "loadsched/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "loadsched/errors.hpp"

namespace loadsched {

void PipelineConfig::validate() const {
    trace.validate();
    if (buffer_capacity == 0) throw ConfigError("buffer_capacity must be >= 1");
    if (chunk_threshold == 0) throw ConfigError("chunk_threshold must be >= 1");
    if (model.seek_cost < 0.0 || model.stream_cost < 0.0)
        throw ConfigError("seek_cost and stream_cost must be >= 0");
    if (pso.swarm_size == 0) throw ConfigError("pso_swarm must be >= 1");
    if (pso.max_iters == 0) throw ConfigError("pso_iters must be >= 1");
    if (pso.p_personal < 0.0 || pso.p_personal > 1.0 || pso.p_global < 0.0 || pso.p_global > 1.0)
        throw ConfigError("pso pull probabilities must lie in [0, 1]");
    if (pso.inertia < 0.0 || pso.inertia >= 1.0) throw ConfigError("pso_inertia must lie in [0, 1)");
    if (pso.kick < 0.0 || pso.kick > 1.0) throw ConfigError("pso_kick must lie in [0, 1]");
}

namespace {

std::uint64_t to_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        std::uint64_t v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for " + key + ": '" + value + "'");
    }
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad number for " + key + ": '" + value + "'");
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "0" || value == "false") return false;
    if (value == "1" || value == "true") return true;
    throw ConfigError("bad boolean for " + key + ": '" + value + "' (use 0/1)");
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void apply_config_entry(PipelineConfig& c, const std::string& key, const std::string& value) {
    if (key == "dataset_size") c.trace.dataset_size = to_u64(key, value);
    else if (key == "num_epochs") c.trace.num_epochs = std::uint32_t(to_u64(key, value));
    else if (key == "num_nodes") c.trace.num_nodes = std::uint32_t(to_u64(key, value));
    else if (key == "local_batch") c.trace.local_batch = to_u64(key, value);
    else if (key == "seed") c.trace.seed = to_u64(key, value);
    else if (key == "drop_last") c.trace.drop_last = to_bool(key, value);
    else if (key == "buffer_capacity") c.buffer_capacity = to_u64(key, value);
    else if (key == "policy") {
        if (value == "clairvoyant") c.policy = Policy::Clairvoyant;
        else if (value == "lru") c.policy = Policy::Lru;
        else throw ConfigError("policy must be clairvoyant or lru");
    } else if (key == "graph_mode") {
        if (value == "global") c.graph_mode = WindowMode::Global;
        else if (value == "pernode") c.graph_mode = WindowMode::PerNode;
        else throw ConfigError("graph_mode must be global or pernode");
    } else if (key == "chunk_threshold") c.chunk_threshold = to_u64(key, value);
    else if (key == "chunk_insert_redundant") c.chunk_insert_redundant = to_bool(key, value);
    else if (key == "seek_cost") c.model.seek_cost = to_double(key, value);
    else if (key == "stream_cost") c.model.stream_cost = to_double(key, value);
    else if (key == "stride_seek_factor") c.factors.stride_seek_factor = to_double(key, value);
    else if (key == "cycle_seek_factor") c.factors.cycle_seek_factor = to_double(key, value);
    else if (key == "pso_swarm") c.pso.swarm_size = std::uint32_t(to_u64(key, value));
    else if (key == "pso_iters") c.pso.max_iters = std::uint32_t(to_u64(key, value));
    else if (key == "pso_p_personal") c.pso.p_personal = to_double(key, value);
    else if (key == "pso_p_global") c.pso.p_global = to_double(key, value);
    else if (key == "pso_stagnation") c.pso.stagnation_limit = std::uint32_t(to_u64(key, value));
    else if (key == "pso_inertia") c.pso.inertia = to_double(key, value);
    else if (key == "pso_kick") c.pso.kick = to_double(key, value);
    else if (key == "pso_restart") c.pso.restart_limit = std::uint32_t(to_u64(key, value));
    else if (key == "optim_order") c.optim_order = to_bool(key, value);
    else if (key == "optim_remap") c.optim_remap = to_bool(key, value);
    else if (key == "optim_balance") c.optim_balance = to_bool(key, value);
    else if (key == "optim_chunk") c.optim_chunk = to_bool(key, value);
    else throw ConfigError("unknown config key: " + key);
}

PipelineConfig parse_config(std::istream& in) {
    PipelineConfig config;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        const std::size_t b = line.find_last_not_of(" \t\r");
        line = line.substr(a, b - a + 1);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        apply_config_entry(config, line.substr(0, eq), line.substr(eq + 1));
    }
    return config;
}

PipelineConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

void write_config(std::ostream& out, const PipelineConfig& c) {
    out << "dataset_size=" << c.trace.dataset_size << "\n";
    out << "num_epochs=" << c.trace.num_epochs << "\n";
    out << "num_nodes=" << c.trace.num_nodes << "\n";
    out << "local_batch=" << c.trace.local_batch << "\n";
    out << "seed=" << c.trace.seed << "\n";
    out << "drop_last=" << (c.trace.drop_last ? 1 : 0) << "\n";
    out << "buffer_capacity=" << c.buffer_capacity << "\n";
    out << "policy=" << policy_name(c.policy) << "\n";
    out << "graph_mode=" << mode_name(c.graph_mode) << "\n";
    out << "chunk_threshold=" << c.chunk_threshold << "\n";
    out << "chunk_insert_redundant=" << (c.chunk_insert_redundant ? 1 : 0) << "\n";
    out << "seek_cost=" << format_double(c.model.seek_cost) << "\n";
    out << "stream_cost=" << format_double(c.model.stream_cost) << "\n";
    out << "stride_seek_factor=" << format_double(c.factors.stride_seek_factor) << "\n";
    out << "cycle_seek_factor=" << format_double(c.factors.cycle_seek_factor) << "\n";
    out << "pso_swarm=" << c.pso.swarm_size << "\n";
    out << "pso_iters=" << c.pso.max_iters << "\n";
    out << "pso_p_personal=" << format_double(c.pso.p_personal) << "\n";
    out << "pso_p_global=" << format_double(c.pso.p_global) << "\n";
    out << "pso_stagnation=" << c.pso.stagnation_limit << "\n";
    out << "pso_inertia=" << format_double(c.pso.inertia) << "\n";
    out << "pso_kick=" << format_double(c.pso.kick) << "\n";
    out << "pso_restart=" << c.pso.restart_limit << "\n";
    out << "optim_order=" << (c.optim_order ? 1 : 0) << "\n";
    out << "optim_remap=" << (c.optim_remap ? 1 : 0) << "\n";
    out << "optim_balance=" << (c.optim_balance ? 1 : 0) << "\n";
    out << "optim_chunk=" << (c.optim_chunk ? 1 : 0) << "\n";
}

const char* policy_name(Policy policy) {
    return policy == Policy::Clairvoyant ? "clairvoyant" : "lru";
}

const char* mode_name(WindowMode mode) {
    return mode == WindowMode::Global ? "global" : "pernode";
}

} // namespace loadsched
