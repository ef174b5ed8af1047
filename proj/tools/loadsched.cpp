// loadsched: offline data-loading scheduler and trace-driven buffer/IO
// simulator. Subcommands cover each pipeline stage plus a one-shot `plan`
// that writes every artifact of a run.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "loadsched/balance.hpp"
#include "loadsched/buffer.hpp"
#include "loadsched/chunking.hpp"
#include "loadsched/config.hpp"
#include "loadsched/cost_model.hpp"
#include "loadsched/epoch_order.hpp"
#include "loadsched/errors.hpp"
#include "loadsched/locality.hpp"
#include "loadsched/pipeline.hpp"
#include "loadsched/plan.hpp"
#include "loadsched/prng.hpp"
#include "loadsched/reuse_graph.hpp"
#include "loadsched/store.hpp"
#include "loadsched/trace.hpp"

namespace {

using namespace loadsched;

struct ConfigArgs {
    std::string config_path;
    std::vector<std::string> overrides; // "key=value", applied after the file
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
    cmd->add_option("--config", args.config_path, "Run configuration file (key=value lines)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--set", args.overrides,
                    "Override one configuration key (key=value, repeatable)");
}

PipelineConfig load_config(const ConfigArgs& args) {
    PipelineConfig config;
    if (!args.config_path.empty()) config = parse_config_file(args.config_path);
    for (const std::string& entry : args.overrides) {
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got: " + entry);
        apply_config_entry(config, entry.substr(0, eq), entry.substr(eq + 1));
    }
    return config;
}

// Write to the path, or to stdout when the path is empty.
void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw StorageError("cannot open for writing: " + path);
    out << text;
    if (!out) throw StorageError("write failed: " + path);
}

std::string order_text(const EpochOrder& order) {
    std::ostringstream out;
    out << "order:";
    for (std::uint32_t e : order.order) out << ' ' << e;
    out << "\ncost: " << order.cost << "\n";
    return out.str();
}

AccessTrace trace_from(const std::string& trace_path, const PipelineConfig& config) {
    if (!trace_path.empty()) return read_trace_file(trace_path);
    return generate_trace(config.trace);
}

int cmd_gen_trace(const ConfigArgs& args, const std::string& out_path) {
    const PipelineConfig config = load_config(args);
    config.trace.validate();
    const AccessTrace trace = generate_trace(config.trace);
    if (out_path.empty()) {
        write_trace(std::cout, trace);
    } else {
        write_trace_file(out_path, trace);
        std::cout << "wrote " << out_path << " (" << trace.config.num_epochs << " epochs x "
                  << trace.epoch_length() << " ids)\n";
    }
    return 0;
}

int cmd_build_graph(const ConfigArgs& args, const std::string& trace_path,
                    const std::string& out_path) {
    const PipelineConfig config = load_config(args);
    const AccessTrace trace = trace_from(trace_path, config);
    const ReuseGraph graph = build_reuse_graph(trace, config.buffer_capacity, config.graph_mode);
    if (out_path.empty()) {
        write_graph(std::cout, graph);
    } else {
        write_graph_file(out_path, graph);
        std::cout << "wrote " << out_path << " (" << graph.num_epochs << "x" << graph.num_epochs
                  << ", window " << graph.buffer_size << " per node, " << mode_name(graph.mode)
                  << ")\n";
    }
    return 0;
}

int cmd_order(const ConfigArgs& args, const std::string& graph_path, bool exact,
              const std::string& out_path) {
    const PipelineConfig config = load_config(args);
    ReuseGraph graph;
    if (!graph_path.empty()) {
        graph = read_graph_file(graph_path);
    } else {
        graph = build_reuse_graph(generate_trace(config.trace), config.buffer_capacity,
                                  config.graph_mode);
    }
    EpochOrder best;
    if (exact) {
        best = brute_force_order(graph);
    } else {
        PsoParams params = config.pso;
        params.seed = config.trace.seed;
        const PsoResult result = pso_order(graph, params);
        best = result.best;
        std::cerr << "swarm iterations: " << result.iterations << "\n";
    }
    write_text(out_path, order_text(best));
    if (!out_path.empty())
        std::cout << "wrote " << out_path << " (cost " << best.cost << ")\n";
    return 0;
}

int cmd_plan(const ConfigArgs& args, const std::string& out_dir) {
    const PipelineConfig config = load_config(args);
    const PipelineResult result = run_pipeline(config, out_dir);
    const std::uint64_t accesses = result.sim.total_hits + result.sim.total_misses;
    char line[256];
    std::snprintf(line, sizeof line,
                  "policy=%s misses=%llu hits=%llu hit_rate=%.2f%% baseline_misses=%llu\n",
                  policy_name(result.sim.policy), (unsigned long long)result.sim.total_misses,
                  (unsigned long long)result.sim.total_hits,
                  accesses == 0 ? 0.0 : 100.0 * double(result.sim.total_hits) / double(accesses),
                  (unsigned long long)result.baseline_sim.total_misses);
    std::cout << line;
    if (!out_dir.empty()) std::cout << "artifacts in " << out_dir << "\n";
    return 0;
}

int cmd_simulate(const ConfigArgs& args, const std::string& plan_path, const std::string& policy,
                 std::int64_t capacity, const std::string& metrics_path) {
    PipelineConfig config = load_config(args);
    if (!policy.empty()) apply_config_entry(config, "policy", policy);
    if (capacity >= 0)
        apply_config_entry(config, "buffer_capacity", std::to_string(capacity));

    SchedulePlan plan;
    if (!plan_path.empty()) {
        plan = read_plan_file(plan_path);
    } else {
        plan = plan_schedule(config).plan;
    }
    const bool redundant =
        config.chunk_insert_redundant && config.optim_chunk && plan.chunk_threshold > 0;
    const SimResult sim = simulate_plan(plan, config.buffer_capacity, config.policy, redundant);

    if (!metrics_path.empty()) {
        std::ofstream out(metrics_path, std::ios::binary);
        if (!out) throw StorageError("cannot open for writing: " + metrics_path);
        write_metrics(out, plan, sim, config.model);
    }
    const std::uint64_t accesses = sim.total_hits + sim.total_misses;
    char line[192];
    std::snprintf(line, sizeof line, "policy=%s capacity=%llu misses=%llu hits=%llu hit_rate=%.2f%%\n",
                  policy_name(sim.policy), (unsigned long long)config.buffer_capacity,
                  (unsigned long long)sim.total_misses, (unsigned long long)sim.total_hits,
                  accesses == 0 ? 0.0 : 100.0 * double(sim.total_hits) / double(accesses));
    std::cout << line;
    return 0;
}

int cmd_bench_store(const std::string& store_path, bool create, std::uint64_t count,
                    std::uint64_t size, std::uint64_t fill_seed, std::uint64_t max_bytes,
                    std::uint32_t procs, std::uint64_t seed, const std::string& out_dir) {
    if (create) {
        create_store(store_path, count, size, fill_seed, max_bytes);
        std::cout << "created " << store_path << " (" << count << " x " << size << " bytes)\n";
    }
    const Store store(store_path);
    const std::vector<BenchResult> results = bench_all_patterns(store, procs, seed);

    std::ostringstream bench_csv;
    bench_csv << "pattern,procs,reads,bytes,seconds\n";
    for (const BenchResult& r : results) {
        std::uint64_t bytes = 0;
        for (const BenchRead& read : r.reads) bytes += read.bytes;
        char line[160];
        std::snprintf(line, sizeof line, "%s,%u,%zu,%llu,%.6f\n", pattern_name(r.pattern),
                      r.procs, r.reads.size(), (unsigned long long)bytes, r.seconds);
        bench_csv << line;
        std::printf("%-18s procs=%u reads=%zu seconds=%.6f\n", pattern_name(r.pattern), r.procs,
                    r.reads.size(), r.seconds);
    }

    if (!out_dir.empty()) {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw StorageError("cannot create output directory: " + out_dir);
        write_text((fs::path(out_dir) / "bench.csv").string(), bench_csv.str());
        for (const BenchResult& r : results) {
            std::ostringstream csv;
            csv << "proc,offset,bytes\n";
            for (const BenchRead& read : r.reads)
                csv << read.proc << ',' << read.offset << ',' << read.bytes << "\n";
            const std::string name = std::string("offsets_") + pattern_name(r.pattern) + ".csv";
            write_text((fs::path(out_dir) / name).string(), csv.str());
        }
        std::cout << "bench artifacts in " << out_dir << "\n";
    }
    return 0;
}

int cmd_calibrate(double random_seconds, double full_chunk_seconds, std::uint64_t total,
                  std::uint32_t procs, std::uint64_t max_threshold, const std::string& out_path) {
    const CostModel model = calibrate(random_seconds, full_chunk_seconds, total, procs);
    const std::uint64_t threshold = derive_threshold(model, max_threshold);
    char text[192];
    std::snprintf(text, sizeof text, "seek_cost=%.17g\nstream_cost=%.17g\nchunk_threshold=%llu\n",
                  model.seek_cost, model.stream_cost, (unsigned long long)threshold);
    std::cout << text;
    if (!out_path.empty()) {
        char file_text[128];
        std::snprintf(file_text, sizeof file_text, "seek_cost=%.17g\nstream_cost=%.17g\n",
                      model.seek_cost, model.stream_cost);
        write_text(out_path, file_text);
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_report(const ConfigArgs& args, const std::string& out_path) {
    const PipelineConfig config = load_config(args);
    write_text(out_path, summary_text(config));
    if (!out_path.empty()) std::cout << "wrote " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Offline data-loading scheduler and buffer/IO simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "loadsched 1.0");

    ConfigArgs gen_args;
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("gen-trace", "Generate the per-epoch shuffle trace");
    add_config_options(gen, gen_args);
    gen->add_option("--out", gen_out, "Trace file to write (default: stdout)");

    ConfigArgs graph_args;
    std::string graph_trace, graph_out;
    CLI::App* graph = app.add_subcommand("build-graph", "Build the epoch reuse graph");
    add_config_options(graph, graph_args);
    graph->add_option("--trace", graph_trace, "Trace file (default: regenerate from config)")
        ->check(CLI::ExistingFile);
    graph->add_option("--out", graph_out, "Graph file to write (default: stdout)");

    ConfigArgs order_args;
    std::string order_graph, order_out;
    bool order_exact = false, order_pso = false;
    CLI::App* order = app.add_subcommand("order", "Choose the epoch execution order");
    add_config_options(order, order_args);
    order->add_option("--graph", order_graph, "Graph file (default: rebuild from config)")
        ->check(CLI::ExistingFile);
    CLI::Option* exact_flag = order->add_flag("--exact", order_exact, "Exhaustive search (small epoch counts)");
    order->add_flag("--pso", order_pso, "Swap-sequence swarm search (default)")
        ->excludes(exact_flag);
    order->add_option("--out", order_out, "Order file to write (default: stdout)");

    ConfigArgs plan_args;
    std::string plan_dir;
    CLI::App* plan = app.add_subcommand(
        "plan", "Run the full pipeline and write all artifacts of the run");
    add_config_options(plan, plan_args);
    plan->add_option("--out-dir", plan_dir, "Directory for trace/graph/order/plan/metrics/summary");

    ConfigArgs sim_args;
    std::string sim_plan, sim_policy, sim_metrics;
    std::int64_t sim_capacity = -1;
    CLI::App* sim = app.add_subcommand("simulate", "Replay a plan through the buffer model");
    add_config_options(sim, sim_args);
    sim->add_option("--plan", sim_plan, "Plan file (default: re-plan from config)")
        ->check(CLI::ExistingFile);
    sim->add_option("--policy", sim_policy, "Eviction policy override (clairvoyant|lru)");
    sim->add_option("--capacity", sim_capacity, "Per-node buffer capacity override (samples)");
    sim->add_option("--metrics", sim_metrics, "Write the per-step metrics CSV here");

    std::string bench_store_path, bench_dir;
    bool bench_create = false;
    std::uint64_t bench_count = 4096, bench_size = 4096, bench_fill_seed = 1, bench_seed = 0;
    std::uint64_t bench_budget = kDefaultStoreBudget;
    std::uint32_t bench_procs = 4;
    CLI::App* bench = app.add_subcommand("bench-store",
                                         "Time access patterns against a sample store file");
    bench->add_option("--store", bench_store_path, "Store file path")->required();
    bench->add_flag("--create", bench_create, "Create the store first");
    bench->add_option("--count", bench_count, "Samples in a created store");
    bench->add_option("--size", bench_size, "Bytes per sample in a created store");
    bench->add_option("--fill-seed", bench_fill_seed, "Payload fill seed for a created store");
    bench->add_option("--max-bytes", bench_budget, "Creation size budget in bytes");
    bench->add_option("--procs", bench_procs, "Simulated reader processes");
    bench->add_option("--seed", bench_seed, "Shuffle seed for the random pattern");
    bench->add_option("--out-dir", bench_dir, "Write bench.csv and per-pattern offset CSVs here");

    double cal_random = 0.0, cal_full = 0.0;
    std::uint64_t cal_total = 0, cal_cap = 1 << 20;
    std::uint32_t cal_procs = 1;
    std::string cal_out;
    CLI::App* cal = app.add_subcommand("calibrate",
                                       "Fit seek/stream costs from two measured pattern times");
    cal->add_option("--random", cal_random, "Measured random-access seconds")->required();
    cal->add_option("--full-chunk", cal_full, "Measured full-chunk seconds")->required();
    cal->add_option("--total", cal_total, "Samples read in the measurements")->required();
    cal->add_option("--procs", cal_procs, "Processes used in the measurements")->required();
    cal->add_option("--max-threshold", cal_cap, "Cap for the derived chunk threshold");
    cal->add_option("--out", cal_out, "Write the fitted model here (key=value)");

    ConfigArgs report_args;
    std::string report_out;
    CLI::App* report = app.add_subcommand("report",
                                          "Ablation summary: each optimization added in turn");
    add_config_options(report, report_args);
    report->add_option("--out", report_out, "Summary file to write (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed()) return cmd_gen_trace(gen_args, gen_out);
        if (graph->parsed()) return cmd_build_graph(graph_args, graph_trace, graph_out);
        if (order->parsed()) return cmd_order(order_args, order_graph, order_exact, order_out);
        if (plan->parsed()) return cmd_plan(plan_args, plan_dir);
        if (sim->parsed())
            return cmd_simulate(sim_args, sim_plan, sim_policy, sim_capacity, sim_metrics);
        if (bench->parsed())
            return cmd_bench_store(bench_store_path, bench_create, bench_count, bench_size,
                                   bench_fill_seed, bench_budget, bench_procs, bench_seed,
                                   bench_dir);
        if (cal->parsed())
            return cmd_calibrate(cal_random, cal_full, cal_total, cal_procs, cal_cap, cal_out);
        if (report->parsed()) return cmd_report(report_args, report_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return int(ErrorClass::Internal);
    }
    return 0;
}
