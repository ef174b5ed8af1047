#include "doctest.h"

#include <algorithm>
#include <vector>

#include "loadsched/balance.hpp"
#include "loadsched/errors.hpp"
#include "loadsched/prng.hpp"

using namespace loadsched;

namespace {

// Build a step where node k carries hits[k] buffer hits and fetches[k] PFS
// fetches; ids are distinct and increase with node index so "largest fetch id"
// behavior is easy to predict.
StepAssignment make_step(const std::vector<std::uint64_t>& hits,
                         const std::vector<std::uint64_t>& fetches) {
    StepAssignment step;
    step.nodes.resize(hits.size());
    SampleId next = 0;
    for (std::size_t k = 0; k < hits.size(); ++k) {
        for (std::uint64_t i = 0; i < hits[k]; ++i)
            step.nodes[k].push_back({next++, Source::BufferHit});
        for (std::uint64_t i = 0; i < fetches[k]; ++i)
            step.nodes[k].push_back({next++, Source::PfsFetch});
    }
    return step;
}

std::vector<SampleId> batch_of(const StepAssignment& step) {
    std::vector<SampleId> ids;
    for (const auto& node : step.nodes)
        for (const Assigned& a : node) ids.push_back(a.id);
    return ids;
}

std::uint64_t spread(const std::vector<std::uint64_t>& counts) {
    auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    return *hi - *lo;
}

} // namespace

TEST_CASE("already balanced steps are left untouched") {
    StepAssignment step = make_step({0, 0, 0, 0}, {4, 4, 4, 4});
    StepAssignment before = step;
    CHECK(balance_step(step) == 0);
    CHECK(step.nodes == before.nodes);

    StepAssignment off_by_one = make_step({2, 2}, {3, 2});
    CHECK(balance_step(off_by_one) == 0);
}

TEST_CASE("a lopsided two-node step settles at an even split") {
    StepAssignment step = make_step({0, 0}, {107, 41});
    std::vector<SampleId> batch = batch_of(step);
    const std::uint64_t moves = balance_step(step);
    CHECK(moves == 33);
    CHECK(step.fetch_counts() == std::vector<std::uint64_t>{74, 74});
    CHECK(same_multiset(step, batch));
    // The donor keeps its numerically smallest fetch ids; the moved ones are
    // exactly the 33 largest, appended to the recipient in descending order.
    std::vector<SampleId> donor_ids;
    for (const Assigned& a : step.nodes[0]) donor_ids.push_back(a.id);
    CHECK(*std::max_element(donor_ids.begin(), donor_ids.end()) == 73);
    std::vector<SampleId> moved;
    for (std::size_t i = 41; i < step.nodes[1].size(); ++i) {
        CHECK(step.nodes[1][i].source == Source::PfsFetch);
        moved.push_back(step.nodes[1][i].id);
    }
    REQUIRE(moved.size() == 33);
    CHECK(moved.front() == 106);
    CHECK(std::is_sorted(moved.rbegin(), moved.rend()));
    CHECK(moved.back() == 74);
}

TEST_CASE("hits stay put even when their node is the most loaded") {
    StepAssignment step = make_step({4, 0, 0, 0}, {6, 2, 2, 2});
    std::vector<SampleId> batch = batch_of(step);
    balance_step(step);
    CHECK(step.fetch_counts() == std::vector<std::uint64_t>{3, 3, 3, 3});
    // Node 0's four hits (ids 0..3) are still its first four entries.
    for (SampleId id = 0; id < 4; ++id) CHECK(step.nodes[0][id] == Assigned{id, Source::BufferHit});
    CHECK(same_multiset(step, batch));
}

TEST_CASE("an empty node pulls work from the heaviest one") {
    StepAssignment step = make_step({0, 0, 0, 0}, {10, 0, 2, 4});
    balance_step(step);
    CHECK(step.fetch_counts() == std::vector<std::uint64_t>{4, 4, 4, 4});

    StepAssignment skewed = make_step({0, 0, 0, 0}, {10, 2, 2, 2});
    balance_step(skewed);
    CHECK(skewed.fetch_counts() == std::vector<std::uint64_t>{4, 4, 4, 4});
}

TEST_CASE("no nodes is rejected") {
    StepAssignment step;
    CHECK_THROWS_AS(balance_step(step), ValidationError);
}

TEST_CASE("random steps always end within one fetch of each other") {
    for (int trial = 0; trial < 500; ++trial) {
        SplitMix64 rng(9100 + trial);
        const std::size_t N = 2 + rng.next_below(7);
        std::vector<std::uint64_t> hits(N), fetches(N);
        for (std::size_t k = 0; k < N; ++k) {
            hits[k] = rng.next_below(5);
            fetches[k] = rng.next_below(40);
        }
        StepAssignment step = make_step(hits, fetches);
        std::vector<SampleId> batch = batch_of(step);
        const std::vector<std::uint64_t> before = step.fetch_counts();
        balance_step(step);
        const std::vector<std::uint64_t> after = step.fetch_counts();
        REQUIRE(spread(after) <= 1);
        REQUIRE(same_multiset(step, batch));
        // Total fetches conserved; hit counts per node unchanged.
        std::uint64_t tot_before = 0, tot_after = 0;
        for (std::size_t k = 0; k < N; ++k) {
            tot_before += before[k];
            tot_after += after[k];
            CHECK(step.nodes[k].size() - after[k] == hits[k]);
        }
        CHECK(tot_before == tot_after);
    }
}

TEST_CASE("barrier time is the slowest node's per-fetch cost") {
    CostModel model{2.0, 0.5}; // seek, stream
    StepAssignment step = make_step({3, 0}, {4, 1});
    CHECK(barrier_time(step, model) == doctest::Approx(4 * 2.5));
    balance_step(step);
    CHECK(barrier_time(step, model) == doctest::Approx(3 * 2.5));

    StepAssignment skewed = make_step({0, 0}, {107, 41});
    const double before = barrier_time(skewed, model);
    balance_step(skewed);
    const double after = barrier_time(skewed, model);
    CHECK(before == doctest::Approx(107 * 2.5));
    CHECK(after == doctest::Approx(74 * 2.5));
    CHECK(before / after == doctest::Approx(107.0 / 74.0));

    StepAssignment none = make_step({2, 2}, {0, 0});
    CHECK(barrier_time(none, model) == 0.0);
}

TEST_CASE("batch size rows follow the plan and report population stddev") {
    SchedulePlan plan;
    plan.num_nodes = 2;
    EpochPlan e;
    e.epoch = 3;
    StepPlan balanced;
    balanced.assignment = make_step({1, 1}, {1, 1});
    StepPlan single;
    single.assignment = make_step({0, 0}, {4, 0});
    e.steps = {balanced, single};
    plan.epochs = {e};

    std::vector<StepSizes> rows = batch_size_stats(plan);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].epoch == 3);
    CHECK(rows[0].step == 0);
    CHECK(rows[0].sizes == std::vector<std::uint64_t>{2, 2});
    CHECK(rows[0].stddev == doctest::Approx(0.0));
    CHECK(rows[1].step == 1);
    CHECK(rows[1].sizes == std::vector<std::uint64_t>{4, 0});
    CHECK(rows[1].stddev == doctest::Approx(2.0));
}
