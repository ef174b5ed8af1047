#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "loadsched/errors.hpp"
#include "loadsched/store.hpp"

using namespace loadsched;

namespace {

// Self-deleting scratch path under /tmp.
struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/loadsched_test_" + name) {
        std::remove(path.c_str());
    }
    ~TempFile() { std::remove(path.c_str()); }
};

std::vector<char> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void spit(const std::string& path, const std::vector<char>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    REQUIRE(out.good());
    out.write(bytes.data(), std::streamsize(bytes.size()));
}

std::string hex(const std::vector<std::byte>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (std::byte b : bytes) {
        out += digits[std::to_integer<unsigned>(b) >> 4];
        out += digits[std::to_integer<unsigned>(b) & 0xF];
    }
    return out;
}

} // namespace

TEST_CASE("store files are reproducible and carry their shape in the header") {
    TempFile a("store_a.bin"), b("store_b.bin");
    create_store(a.path, 4, 8, 1);
    create_store(b.path, 4, 8, 1);
    CHECK(slurp(a.path) == slurp(b.path));
    CHECK(slurp(a.path).size() == kStoreHeaderBytes + 32);

    Store store(a.path);
    CHECK(store.header().version == 1);
    CHECK(store.sample_count() == 4);
    CHECK(store.sample_size() == 8);

    // First 32 payload bytes of fill stream seed 1, frozen.
    CHECK(hex(store.read_chunk(0, 4)) ==
          "c15c0289ec2d0a9167ec8e65a18debbe5e5532fbeea293f80bc942ee9086c171");

    // A different fill seed changes the payload.
    TempFile c("store_c.bin");
    create_store(c.path, 4, 8, 2);
    CHECK(slurp(c.path) != slurp(a.path));
}

TEST_CASE("single reads and chunk reads agree byte for byte") {
    TempFile t("store_eq.bin");
    create_store(t.path, 12, 16, 7);
    Store store(t.path);
    for (std::uint64_t i = 0; i < 12; ++i) CHECK(store.read_one(i) == store.read_chunk(i, 1));
    std::vector<std::byte> whole = store.read_chunk(0, 12);
    CHECK(whole.size() == 12 * 16);
    for (std::uint64_t start = 0; start < 12; ++start) {
        for (std::uint64_t count = 1; start + count <= 12; ++count) {
            std::vector<std::byte> chunk = store.read_chunk(start, count);
            std::vector<std::byte> glued;
            for (std::uint64_t i = 0; i < count; ++i) {
                std::vector<std::byte> one = store.read_one(start + i);
                glued.insert(glued.end(), one.begin(), one.end());
            }
            REQUIRE(chunk == glued);
        }
    }
}

TEST_CASE("out-of-range reads are rejected") {
    TempFile t("store_range.bin");
    create_store(t.path, 4, 8, 1);
    Store store(t.path);
    CHECK_THROWS_AS(store.read_one(4), ValidationError);
    CHECK_THROWS_AS(store.read_chunk(0, 0), ValidationError);
    CHECK_THROWS_AS(store.read_chunk(0, 5), ValidationError);
    CHECK_THROWS_AS(store.read_chunk(3, 2), ValidationError);
    CHECK_NOTHROW(store.read_chunk(3, 1));
}

TEST_CASE("malformed store files fail to open") {
    CHECK_THROWS_AS(Store("/tmp/loadsched_test_does_not_exist.bin"), StorageError);

    TempFile t("store_bad.bin");
    create_store(t.path, 4, 8, 1);
    std::vector<char> good = slurp(t.path);

    std::vector<char> bad_magic = good;
    bad_magic[0] = 'X';
    spit(t.path, bad_magic);
    CHECK_THROWS_AS(Store(t.path), StorageError);

    std::vector<char> bad_version = good;
    bad_version[4] = 9;
    spit(t.path, bad_version);
    CHECK_THROWS_AS(Store(t.path), StorageError);

    std::vector<char> truncated = good;
    truncated.pop_back();
    spit(t.path, truncated);
    CHECK_THROWS_AS(Store(t.path), StorageError);

    std::vector<char> padded = good;
    padded.push_back(0);
    spit(t.path, padded);
    CHECK_THROWS_AS(Store(t.path), StorageError);

    spit(t.path, std::vector<char>(good.begin(), good.begin() + 3)); // shorter than magic
    CHECK_THROWS_AS(Store(t.path), StorageError);
}

TEST_CASE("creation guards: empty shapes, budget, overflow") {
    TempFile t("store_guard.bin");
    CHECK_THROWS_AS(create_store(t.path, 0, 8, 1), StorageError);
    CHECK_THROWS_AS(create_store(t.path, 4, 0, 1), StorageError);
    // 4 * 8 + header = 54 bytes > 53.
    CHECK_THROWS_AS(create_store(t.path, 4, 8, 1, 53), StorageError);
    CHECK_NOTHROW(create_store(t.path, 4, 8, 1, 54));
    CHECK_THROWS_AS(create_store(t.path, std::uint64_t(1) << 33, std::uint64_t(1) << 33, 1),
                    StorageError); // count*size wraps past 2^64
    CHECK_THROWS_AS(create_store("/tmp/no_such_dir_loadsched/x.bin", 4, 8, 1), StorageError);
}

TEST_CASE("benchmark patterns issue the documented read shapes") {
    TempFile t("store_bench.bin");
    const std::uint64_t count = 12, size = 16;
    create_store(t.path, count, size, 3);
    Store store(t.path);
    const std::uint32_t procs = 3, per_proc = 4;
    auto offset_of = [&](std::uint64_t idx) { return kStoreHeaderBytes + idx * size; };

    BenchResult random = bench_pattern(store, AccessPattern::Random, procs, 5);
    CHECK(random.pattern == AccessPattern::Random);
    CHECK(random.procs == procs);
    CHECK(random.seconds >= 0.0);
    REQUIRE(random.reads.size() == count);
    std::set<std::uint64_t> seen;
    for (const BenchRead& r : random.reads) {
        CHECK(r.bytes == size);
        seen.insert(r.offset);
    }
    CHECK(seen.size() == count); // every sample read exactly once
    for (std::uint32_t p = 0; p < procs; ++p)
        CHECK(random.reads[p * per_proc].proc == p);
    // Same seed, same order; different seed, different order.
    CHECK(bench_pattern(store, AccessPattern::Random, procs, 5).reads[0].offset ==
          random.reads[0].offset);

    BenchResult stride = bench_pattern(store, AccessPattern::SequentialStride, procs, 5);
    REQUIRE(stride.reads.size() == count);
    std::size_t i = 0;
    for (std::uint32_t p = 0; p < procs; ++p)
        for (std::uint64_t idx = p; idx < count; idx += procs, ++i) {
            CHECK(stride.reads[i].proc == p);
            CHECK(stride.reads[i].offset == offset_of(idx));
        }

    BenchResult cycle = bench_pattern(store, AccessPattern::ChunkCycle, procs, 5);
    REQUIRE(cycle.reads.size() == count);
    i = 0;
    for (std::uint32_t p = 0; p < procs; ++p)
        for (std::uint64_t k = 0; k < per_proc; ++k, ++i) {
            CHECK(cycle.reads[i].proc == p);
            CHECK(cycle.reads[i].offset == offset_of(p * per_proc + k));
        }

    BenchResult full = bench_pattern(store, AccessPattern::FullChunk, procs, 5);
    REQUIRE(full.reads.size() == procs); // one read per proc
    for (std::uint32_t p = 0; p < procs; ++p) {
        CHECK(full.reads[p].proc == p);
        CHECK(full.reads[p].offset == offset_of(p * per_proc));
        CHECK(full.reads[p].bytes == per_proc * size);
    }

    CHECK_THROWS_AS(bench_pattern(store, AccessPattern::Random, 5, 0), ValidationError);
    CHECK_THROWS_AS(bench_pattern(store, AccessPattern::Random, 0, 0), ValidationError);

    std::vector<BenchResult> all = bench_all_patterns(store, procs, 5);
    REQUIRE(all.size() == 4);
    CHECK(all[0].pattern == AccessPattern::Random);
    CHECK(all[1].pattern == AccessPattern::SequentialStride);
    CHECK(all[2].pattern == AccessPattern::ChunkCycle);
    CHECK(all[3].pattern == AccessPattern::FullChunk);
}

TEST_CASE("pattern names match the CLI vocabulary") {
    CHECK(std::strcmp(pattern_name(AccessPattern::Random), "random") == 0);
    CHECK(std::strcmp(pattern_name(AccessPattern::SequentialStride), "sequential-stride") == 0);
    CHECK(std::strcmp(pattern_name(AccessPattern::ChunkCycle), "chunk-cycle") == 0);
    CHECK(std::strcmp(pattern_name(AccessPattern::FullChunk), "full-chunk") == 0);
}
