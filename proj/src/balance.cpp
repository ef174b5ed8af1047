#include "loadsched/balance.hpp"

#include <algorithm>
#include <cmath>

#include "loadsched/errors.hpp"

namespace loadsched {

std::uint64_t balance_step(StepAssignment& step) {
    const std::size_t N = step.nodes.size();
    if (N == 0) throw ValidationError("balance_step: no nodes");
    std::vector<std::uint64_t> counts = step.fetch_counts();

    std::uint64_t moves = 0;
    for (;;) {
        std::size_t donor = 0, recipient = 0;
        for (std::size_t k = 1; k < N; ++k) {
            if (counts[k] > counts[donor]) donor = k;
            if (counts[k] < counts[recipient]) recipient = k;
        }
        if (counts[donor] - counts[recipient] <= 1) break;

        // Move the donor's numerically largest fetch id.
        std::vector<Assigned>& from = step.nodes[donor];
        std::size_t best = from.size();
        for (std::size_t i = 0; i < from.size(); ++i) {
            if (from[i].source != Source::PfsFetch) continue;
            if (best == from.size() || from[i].id > from[best].id) best = i;
        }
        if (best == from.size()) throw InternalError("balance_step: donor has no fetch to move");
        step.nodes[recipient].push_back(from[best]);
        from.erase(from.begin() + std::ptrdiff_t(best));
        --counts[donor];
        ++counts[recipient];
        ++moves;
    }
    return moves;
}

double barrier_time(const StepAssignment& step, const CostModel& model) {
    const double per_fetch = model.seek_cost + model.stream_cost;
    double worst = 0.0;
    for (std::uint64_t count : step.fetch_counts())
        worst = std::max(worst, double(count) * per_fetch);
    return worst;
}

std::vector<StepSizes> batch_size_stats(const SchedulePlan& plan) {
    std::vector<StepSizes> out;
    for (const EpochPlan& epoch : plan.epochs) {
        for (std::size_t t = 0; t < epoch.steps.size(); ++t) {
            StepSizes row;
            row.epoch = epoch.epoch;
            row.step = t;
            for (const auto& list : epoch.steps[t].assignment.nodes)
                row.sizes.push_back(list.size());
            double mean = 0.0;
            for (std::uint64_t s : row.sizes) mean += double(s);
            mean /= double(row.sizes.size());
            double var = 0.0;
            for (std::uint64_t s : row.sizes) var += (double(s) - mean) * (double(s) - mean);
            row.stddev = std::sqrt(var / double(row.sizes.size()));
            out.push_back(std::move(row));
        }
    }
    return out;
}

} // namespace loadsched
