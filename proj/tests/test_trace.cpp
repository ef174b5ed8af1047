#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "loadsched/errors.hpp"
#include "loadsched/trace.hpp"

using namespace loadsched;

namespace {

AccessTrace hand_trace(std::vector<std::vector<SampleId>> epochs, std::uint32_t nodes,
                       std::uint64_t local_batch) {
    AccessTrace t;
    t.config.dataset_size = 0;
    for (const auto& e : epochs)
        for (SampleId id : e) t.config.dataset_size = std::max(t.config.dataset_size, id + 1);
    t.config.num_epochs = std::uint32_t(epochs.size());
    t.config.num_nodes = nodes;
    t.config.local_batch = local_batch;
    t.epochs = std::move(epochs);
    return t;
}

} // namespace

TEST_CASE("golden shuffle for an eight-sample two-node run, frozen") {
    AccessTrace t = generate_trace({8, 2, 2, 2, 42, true});
    REQUIRE(t.epochs.size() == 2);
    CHECK(t.epochs[0] == std::vector<SampleId>{7, 4, 1, 2, 5, 6, 0, 3});
    CHECK(t.epochs[1] == std::vector<SampleId>{0, 5, 2, 6, 4, 1, 7, 3});
}

TEST_CASE("every epoch is a permutation covering all ids") {
    AccessTrace t = generate_trace({4, 1, 1, 4, 777, true});
    REQUIRE(t.epochs.size() == 1);
    std::vector<SampleId> sorted = t.epochs[0];
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<SampleId>{0, 1, 2, 3});
}

TEST_CASE("single-sample dataset always yields [0]") {
    AccessTrace t = generate_trace({1, 3, 1, 1, 5, true});
    for (const auto& e : t.epochs) CHECK(e == std::vector<SampleId>{0});
}

TEST_CASE("regeneration is identical; different seeds differ") {
    TraceConfig cfg{64, 3, 2, 4, 9, true};
    CHECK(generate_trace(cfg).epochs == generate_trace(cfg).epochs);
    TraceConfig other = cfg;
    other.seed = 10;
    CHECK(generate_trace(cfg).epochs != generate_trace(other).epochs);
}

TEST_CASE("ragged tail dropped or kept per drop_last") {
    TraceConfig cfg{7, 1, 2, 2, 3, true}; // B = 4
    CHECK(cfg.steps_per_epoch() == 1);
    CHECK(generate_trace(cfg).epochs[0].size() == 4);

    cfg.drop_last = false;
    CHECK(cfg.steps_per_epoch() == 2);
    AccessTrace t = generate_trace(cfg);
    CHECK(t.epochs[0].size() == 7); // full permutation retained
    std::vector<SampleId> sorted = t.epochs[0];
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<SampleId>{0, 1, 2, 3, 4, 5, 6});
}

TEST_CASE("config validation rejects degenerate shapes") {
    CHECK_THROWS_AS(generate_trace({3, 1, 2, 2, 0, true}), ConfigError);  // D < B
    CHECK_THROWS_AS(generate_trace({0, 1, 1, 1, 0, true}), ConfigError);  // empty dataset
    CHECK_THROWS_AS(generate_trace({4, 0, 1, 1, 0, true}), ConfigError);  // no epochs
    CHECK_THROWS_AS(generate_trace({4, 1, 0, 1, 0, true}), ConfigError);  // no nodes
    CHECK_THROWS_AS(generate_trace({4, 1, 1, 0, 0, true}), ConfigError);  // empty batch
    CHECK_NOTHROW(generate_trace({4, 1, 2, 2, 0, true}));                 // D == B is fine
}

TEST_CASE("slice picks one node's span of the step") {
    AccessTrace t = hand_trace({{5, 2, 7, 1}}, 2, 2);
    CHECK(slice(t, 0, 0, 0) == std::vector<SampleId>{5, 2});
    CHECK(slice(t, 0, 0, 1) == std::vector<SampleId>{7, 1});
}

TEST_CASE("single node slice equals the whole global batch") {
    AccessTrace t = generate_trace({12, 1, 1, 4, 2, true});
    for (std::uint64_t s = 0; s < 3; ++s) CHECK(slice(t, 0, s, 0) == global_batch(t, 0, s));
}

TEST_CASE("concatenating node slices reproduces the global batch") {
    AccessTrace t = generate_trace({24, 2, 3, 2, 11, true});
    for (std::uint32_t e = 0; e < 2; ++e) {
        for (std::uint64_t s = 0; s < t.config.steps_per_epoch(); ++s) {
            std::vector<SampleId> joined;
            for (std::uint32_t n = 0; n < 3; ++n) {
                auto part = slice(t, e, s, n);
                joined.insert(joined.end(), part.begin(), part.end());
            }
            CHECK(joined == global_batch(t, e, s));
        }
    }
}

TEST_CASE("ragged final step clamps slices") {
    AccessTrace t = generate_trace({7, 1, 2, 2, 3, false}); // lengths: step 1 holds 3 ids
    CHECK(global_batch(t, 0, 1).size() == 3);
    CHECK(slice(t, 0, 1, 0).size() == 2);
    CHECK(slice(t, 0, 1, 1).size() == 1);
}

TEST_CASE("out-of-range slice indices are rejected") {
    AccessTrace t = generate_trace({8, 1, 2, 2, 1, true});
    CHECK_THROWS_AS(slice(t, 1, 0, 0), ValidationError);  // epoch
    CHECK_THROWS_AS(slice(t, 0, 2, 0), ValidationError);  // step
    CHECK_THROWS_AS(slice(t, 0, 0, 2), ValidationError);  // node
    CHECK_THROWS_AS(global_batch(t, 1, 0), ValidationError);
}

TEST_CASE("trace text round-trips exactly") {
    AccessTrace t = generate_trace({16, 2, 2, 2, 123, true});
    std::ostringstream out;
    write_trace(out, t);
    std::istringstream in(out.str());
    AccessTrace back = read_trace(in);
    CHECK(back.config.dataset_size == t.config.dataset_size);
    CHECK(back.config.seed == t.config.seed);
    CHECK(back.epochs == t.epochs);

    std::ostringstream again;
    write_trace(again, back);
    CHECK(again.str() == out.str());
}

TEST_CASE("malformed trace text is rejected") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_trace(in);
    };
    CHECK_THROWS_AS(parse("bogus header\n"), ValidationError);
    // a header without shape keys fails the config check
    CHECK_THROWS_AS(parse("loadsched-trace 1\ndataset_size=4\n"), ConfigError);
    AccessTrace t = generate_trace({4, 1, 1, 2, 0, true});
    std::ostringstream out;
    write_trace(out, t);
    std::string broken = out.str();
    broken.pop_back();
    broken.pop_back(); // drop the final id
    CHECK_THROWS_AS(parse(broken), ValidationError);
}

TEST_CASE("trace file helpers report missing paths as storage errors") {
    CHECK_THROWS_AS(read_trace_file("/nonexistent/trace.txt"), StorageError);
    AccessTrace t = generate_trace({4, 1, 1, 2, 0, true});
    CHECK_THROWS_AS(write_trace_file("/nonexistent/dir/trace.txt", t), StorageError);
    const std::string path = "/tmp/loadsched_test_trace.txt";
    write_trace_file(path, t);
    CHECK(read_trace_file(path).epochs == t.epochs);
    std::remove(path.c_str());
}
