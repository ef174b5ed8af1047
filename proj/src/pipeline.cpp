#include "loadsched/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "loadsched/errors.hpp"

namespace loadsched {

namespace {

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

ChunkPlan singles_plan(const std::vector<SampleId>& fetch_ids) {
    std::vector<SampleId> ids = fetch_ids;
    std::sort(ids.begin(), ids.end());
    ChunkPlan plan;
    plan.needed = ids.size();
    for (SampleId id : ids) plan.reads.push_back({Read::Kind::Single, id, id});
    return plan;
}

} // namespace

PlanOutput plan_schedule(const PipelineConfig& config) {
    config.validate();
    PlanOutput out;
    out.trace = generate_trace(config.trace);
    out.graph = build_reuse_graph(out.trace, config.buffer_capacity, config.graph_mode);

    if (config.optim_order) {
        PsoParams params = config.pso;
        params.seed = config.trace.seed; // single-seed determinism
        out.pso = pso_order(out.graph, params);
        out.plan.order = out.pso->best;
    } else {
        out.plan.order = identity_order(out.graph);
    }

    const TraceConfig& tc = config.trace;
    const std::uint64_t steps = tc.steps_per_epoch();
    out.plan.dataset_size = tc.dataset_size;
    out.plan.num_nodes = tc.num_nodes;
    out.plan.local_batch = tc.local_batch;
    out.plan.chunk_threshold = config.optim_chunk ? config.chunk_threshold : 0;

    // Scheduled occurrence times (step granularity) for clairvoyant planning.
    std::vector<std::vector<std::uint64_t>> occ(tc.dataset_size);
    std::uint64_t g = 0;
    for (std::uint32_t e : out.plan.order.order)
        for (std::uint64_t t = 0; t < steps; ++t, ++g)
            for (SampleId id : global_batch(out.trace, e, t)) occ[id].push_back(g);
    std::vector<std::size_t> cursor(tc.dataset_size, 0);

    std::vector<std::unique_ptr<Buffer>> buffers;
    for (std::uint32_t k = 0; k < tc.num_nodes; ++k)
        buffers.push_back(make_buffer(config.policy, config.buffer_capacity));
    std::vector<const IdSet*> views;
    for (const auto& buffer : buffers) views.push_back(&buffer->resident());

    g = 0;
    for (std::uint32_t e : out.plan.order.order) {
        EpochPlan epoch_plan;
        epoch_plan.epoch = e;
        for (std::uint64_t t = 0; t < steps; ++t, ++g) {
            const std::vector<SampleId> batch = global_batch(out.trace, e, t);
            StepPlan step;
            step.assignment = config.optim_remap ? remap_step(views, batch, tc.local_batch)
                                                 : slice_step(views, batch, tc.local_batch);
            step.fetches_before = step.assignment.fetch_counts();
            if (config.optim_balance) balance_step(step.assignment);
            step.fetches_after = step.assignment.fetch_counts();
            if (!same_multiset(step.assignment, batch))
                throw InternalError("plan_schedule: step multiset mismatch");

            for (std::uint32_t k = 0; k < tc.num_nodes; ++k) {
                const std::vector<SampleId> fetch = step.assignment.fetch_ids(k);
                step.reads.push_back(config.optim_chunk
                                         ? plan_chunks(fetch, config.chunk_threshold)
                                         : singles_plan(fetch));
            }

            // Advance the residency snapshots through the buffer model.
            for (std::uint32_t k = 0; k < tc.num_nodes; ++k) {
                for (const Assigned& a : step.assignment.nodes[k]) {
                    std::vector<std::uint64_t>& times = occ[a.id];
                    std::size_t& cur = cursor[a.id];
                    if (cur >= times.size() || times[cur] != g)
                        throw InternalError("plan_schedule: occurrence walk out of sync");
                    const std::uint64_t next_use =
                        cur + 1 < times.size() ? times[cur + 1] : kNeverUsed;
                    ++cur;
                    buffers[k]->access(a.id, next_use);
                }
            }
            if (config.chunk_insert_redundant && config.optim_chunk) {
                for (std::uint32_t k = 0; k < tc.num_nodes; ++k) {
                    for (SampleId id :
                         redundant_ids(step.reads[k], step.assignment.fetch_ids(k))) {
                        const std::vector<std::uint64_t>& times = occ[id];
                        const std::size_t cur = cursor[id];
                        const std::uint64_t next_use =
                            cur < times.size() ? times[cur] : kNeverUsed;
                        buffers[k]->insert_silent(id, next_use);
                    }
                }
            }
            epoch_plan.steps.push_back(std::move(step));
        }
        out.plan.epochs.push_back(std::move(epoch_plan));
    }
    return out;
}

PipelineConfig baseline_config(const PipelineConfig& config) {
    PipelineConfig base = config;
    base.policy = Policy::Lru;
    base.optim_order = false;
    base.optim_remap = false;
    base.optim_balance = false;
    base.optim_chunk = false;
    base.chunk_insert_redundant = false;
    return base;
}

double total_barrier_cost(const SchedulePlan& plan, const CostModel& model) {
    double total = 0.0;
    for (const EpochPlan& epoch : plan.epochs)
        for (const StepPlan& step : epoch.steps) total += barrier_time(step.assignment, model);
    return total;
}

double total_io_cost(const SchedulePlan& plan, const CostModel& model) {
    double total = 0.0;
    for (const EpochPlan& epoch : plan.epochs) {
        for (const StepPlan& step : epoch.steps) {
            double worst = 0.0;
            for (const ChunkPlan& reads : step.reads)
                worst = std::max(worst, read_cost(reads, model));
            total += worst;
        }
    }
    return total;
}

void write_metrics(std::ostream& out, const SchedulePlan& plan, const SimResult& sim,
                   const CostModel& model) {
    out << "epoch,step,node,hits,misses,policy,fetches_before,fetches_after,"
           "barrier_before,barrier_after\n";
    const double per_fetch = model.seek_cost + model.stream_cost;
    std::size_t row = 0;
    for (const EpochPlan& epoch : plan.epochs) {
        for (std::size_t t = 0; t < epoch.steps.size(); ++t) {
            const StepPlan& step = epoch.steps[t];
            std::uint64_t max_before = 0, max_after = 0;
            for (std::uint32_t k = 0; k < plan.num_nodes; ++k) {
                max_before = std::max(max_before, step.fetches_before[k]);
                max_after = std::max(max_after, step.fetches_after[k]);
            }
            for (std::uint32_t k = 0; k < plan.num_nodes; ++k, ++row) {
                const StepNodeStats& stats = sim.rows.at(row);
                if (stats.epoch != epoch.epoch || stats.step != t || stats.node != k)
                    throw InternalError("write_metrics: simulation rows out of order");
                out << epoch.epoch << ',' << t << ',' << k << ',' << stats.hits << ','
                    << stats.misses << ',' << policy_name(sim.policy) << ','
                    << step.fetches_before[k] << ',' << step.fetches_after[k] << ','
                    << fixed(double(max_before) * per_fetch) << ','
                    << fixed(double(max_after) * per_fetch) << "\n";
            }
        }
    }
}

namespace {

PassTotals run_pass(const std::string& name, const PipelineConfig& config) {
    const PlanOutput output = plan_schedule(config);
    const SimResult sim = simulate_plan(output.plan, config.buffer_capacity, config.policy,
                                        config.chunk_insert_redundant && config.optim_chunk);
    PassTotals totals;
    totals.name = name;
    totals.misses = sim.total_misses;
    totals.hits = sim.total_hits;
    const std::uint64_t accesses = sim.total_hits + sim.total_misses;
    totals.hit_rate = accesses == 0 ? 0.0 : 100.0 * double(sim.total_hits) / double(accesses);
    totals.barrier_cost = total_barrier_cost(output.plan, config.model);
    totals.io_cost = total_io_cost(output.plan, config.model);
    return totals;
}

} // namespace

std::vector<PassTotals> ablation_ladder(const PipelineConfig& config) {
    std::vector<PassTotals> passes;
    passes.push_back(run_pass("baseline-lru", baseline_config(config)));

    PipelineConfig run = config;
    run.optim_order = false;
    run.optim_remap = false;
    run.optim_balance = false;
    run.optim_chunk = false;
    passes.push_back(run_pass("no-optim", run));
    run.optim_order = true;
    run.optim_remap = true;
    passes.push_back(run_pass("+order+remap", run));
    run.optim_balance = true;
    passes.push_back(run_pass("+balance", run));
    run.optim_chunk = true;
    passes.push_back(run_pass("+chunking", run));
    return passes;
}

std::string summary_text(const PipelineConfig& config) {
    const std::vector<PassTotals> passes = ablation_ladder(config);
    const PlanOutput final_output = plan_schedule(config);
    const double base_io = passes.front().io_cost;

    std::ostringstream out;
    out << "loadsched summary\n";
    write_config(out, config);
    out << "\n";
    out << "pass           misses       hits  hit_rate  barrier_cost       io_cost  speedup\n";
    for (const PassTotals& pass : passes) {
        char line[160];
        std::snprintf(line, sizeof line, "%-13s %7llu %10llu %8.2f%% %13.3f %13.3f %7.2fx\n",
                      pass.name.c_str(), (unsigned long long)pass.misses,
                      (unsigned long long)pass.hits, pass.hit_rate, pass.barrier_cost,
                      pass.io_cost, pass.io_cost > 0.0 ? base_io / pass.io_cost : 1.0);
        out << line;
    }

    std::vector<ChunkPlan> reads;
    for (const EpochPlan& epoch : final_output.plan.epochs)
        for (const StepPlan& step : epoch.steps)
            for (const ChunkPlan& plan : step.reads) reads.push_back(plan);
    out << "\nchunked_fraction=" << fixed(chunked_fraction(reads), 2) << "%\n";

    const std::vector<StepSizes> sizes = batch_size_stats(final_output.plan);
    double lo = 0.0, hi = 0.0;
    const std::size_t probe = std::min<std::size_t>(sizes.size(), 10);
    for (std::size_t i = 0; i < probe; ++i) {
        lo = i == 0 ? sizes[i].stddev : std::min(lo, sizes[i].stddev);
        hi = i == 0 ? sizes[i].stddev : std::max(hi, sizes[i].stddev);
    }
    out << "batch_stddev_steps_1_10=" << fixed(lo, 2) << ".." << fixed(hi, 2) << "\n";

    const double reduction = passes.back().misses == 0
                                 ? 0.0
                                 : double(passes.front().misses) / double(passes.back().misses);
    if (passes.back().misses == 0) out << "numpfs_reduction=inf\n";
    else out << "numpfs_reduction=" << fixed(reduction, 2) << "x\n";

    out << "order:";
    for (std::uint32_t e : final_output.plan.order.order) out << ' ' << e;
    out << "\norder_cost=" << final_output.plan.order.cost << "\n";
    return out.str();
}

PipelineResult run_pipeline(const PipelineConfig& config, const std::string& out_dir) {
    config.validate();
    PipelineResult result;
    result.output = plan_schedule(config);
    result.sim = simulate_plan(result.output.plan, config.buffer_capacity, config.policy,
                               config.chunk_insert_redundant && config.optim_chunk);

    const PipelineConfig base = baseline_config(config);
    result.baseline_plan = plan_schedule(base).plan;
    result.baseline_sim = simulate_plan(result.baseline_plan, base.buffer_capacity, base.policy);

    if (!out_dir.empty()) {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw StorageError("cannot create output directory: " + out_dir);
        const fs::path dir(out_dir);

        write_trace_file((dir / "trace.txt").string(), result.output.trace);
        write_graph_file((dir / "graph.txt").string(), result.output.graph);
        {
            std::ofstream out(dir / "order.txt", std::ios::binary);
            if (!out) throw StorageError("cannot write order.txt");
            out << "order:";
            for (std::uint32_t e : result.output.plan.order.order) out << ' ' << e;
            out << "\ncost: " << result.output.plan.order.cost << "\n";
        }
        write_plan_file((dir / "plan.txt").string(), result.output.plan);
        {
            std::ofstream out(dir / "metrics.csv", std::ios::binary);
            if (!out) throw StorageError("cannot write metrics.csv");
            write_metrics(out, result.output.plan, result.sim, config.model);
        }
        {
            std::ofstream out(dir / "baseline_metrics.csv", std::ios::binary);
            if (!out) throw StorageError("cannot write baseline_metrics.csv");
            write_metrics(out, result.baseline_plan, result.baseline_sim, config.model);
        }
        {
            std::ofstream out(dir / "summary.txt", std::ios::binary);
            if (!out) throw StorageError("cannot write summary.txt");
            out << summary_text(config);
        }
    }
    return result;
}

} // namespace loadsched
