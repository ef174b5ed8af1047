#include "loadsched/store.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <numeric>

#include "loadsched/errors.hpp"
#include "loadsched/prng.hpp"

namespace loadsched {

namespace {

constexpr char kMagic[4] = {'S', 'L', 'R', 'D'};

void put_u16(std::vector<std::byte>& out, std::uint16_t v) {
    out.push_back(std::byte(v & 0xFF));
    out.push_back(std::byte((v >> 8) & 0xFF));
}

void put_u64(std::vector<std::byte>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(std::byte((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64(const std::byte* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(std::to_integer<unsigned>(p[i])) << (8 * i);
    return v;
}

} // namespace

void create_store(const std::string& path, std::uint64_t sample_count, std::uint64_t sample_size,
                  std::uint64_t fill_seed, std::uint64_t max_bytes) {
    if (sample_count == 0 || sample_size == 0)
        throw StorageError("create_store: sample_count and sample_size must be >= 1");
    const std::uint64_t payload = sample_count * sample_size;
    if (sample_size != 0 && payload / sample_size != sample_count)
        throw StorageError("create_store: size overflow");
    if (kStoreHeaderBytes + payload > max_bytes)
        throw StorageError("create_store: store exceeds disk budget");

    std::vector<std::byte> header;
    header.reserve(kStoreHeaderBytes);
    for (char c : kMagic) header.push_back(std::byte(c));
    put_u16(header, 1);
    put_u64(header, sample_count);
    put_u64(header, sample_size);

    const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd < 0) throw StorageError("create_store: cannot open " + path);
    auto write_all = [&](const void* data, std::size_t bytes) {
        const char* p = static_cast<const char*>(data);
        while (bytes > 0) {
            const ssize_t n = ::write(fd, p, bytes);
            if (n <= 0) {
                ::close(fd);
                throw StorageError("create_store: write failed for " + path);
            }
            p += n;
            bytes -= std::size_t(n);
        }
    };
    write_all(header.data(), header.size());

    // Payload: one continuous splitmix64 byte stream, 1 MiB at a time.
    SplitMix64 rng(fill_seed);
    std::vector<std::uint64_t> block(131072);
    std::uint64_t remaining = payload;
    while (remaining > 0) {
        const std::uint64_t want = std::min<std::uint64_t>(remaining, block.size() * 8);
        const std::size_t words = std::size_t((want + 7) / 8);
        for (std::size_t i = 0; i < words; ++i) block[i] = rng.next();
        write_all(block.data(), std::size_t(want));
        remaining -= want;
    }
    if (::close(fd) != 0) throw StorageError("create_store: close failed for " + path);
}

Store::Store(const std::string& path) {
    fd_ = ::open(path.c_str(), O_RDONLY);
    if (fd_ < 0) throw StorageError("store: cannot open " + path);

    std::byte raw[kStoreHeaderBytes];
    read_at(raw, sizeof raw, 0);
    if (std::memcmp(raw, kMagic, 4) != 0) {
        ::close(fd_);
        fd_ = -1;
        throw StorageError("store: bad magic in " + path);
    }
    header_.version =
        std::uint16_t(std::to_integer<unsigned>(raw[4]) | (std::to_integer<unsigned>(raw[5]) << 8));
    if (header_.version != 1) {
        ::close(fd_);
        fd_ = -1;
        throw StorageError("store: unsupported version in " + path);
    }
    header_.sample_count = get_u64(raw + 6);
    header_.sample_size = get_u64(raw + 14);

    struct stat st{};
    if (::fstat(fd_, &st) != 0) {
        ::close(fd_);
        fd_ = -1;
        throw StorageError("store: fstat failed for " + path);
    }
    const std::uint64_t expect = kStoreHeaderBytes + header_.sample_count * header_.sample_size;
    if (std::uint64_t(st.st_size) != expect) {
        ::close(fd_);
        fd_ = -1;
        throw StorageError("store: file length does not match header in " + path);
    }
}

Store::~Store() {
    if (fd_ >= 0) ::close(fd_);
}

void Store::read_at(void* dst, std::size_t bytes, std::uint64_t offset) const {
    char* p = static_cast<char*>(dst);
    while (bytes > 0) {
        const ssize_t n = ::pread(fd_, p, bytes, off_t(offset));
        if (n <= 0) throw StorageError("store: read failed");
        p += n;
        bytes -= std::size_t(n);
        offset += std::uint64_t(n);
    }
}

std::vector<std::byte> Store::read_one(std::uint64_t index) const {
    if (index >= header_.sample_count) throw ValidationError("store: sample index out of range");
    std::vector<std::byte> out(header_.sample_size);
    read_at(out.data(), out.size(), kStoreHeaderBytes + index * header_.sample_size);
    return out;
}

std::vector<std::byte> Store::read_chunk(std::uint64_t start, std::uint64_t count) const {
    if (count == 0) throw ValidationError("store: read_chunk count must be >= 1");
    if (start >= header_.sample_count || count > header_.sample_count - start)
        throw ValidationError("store: chunk range out of range");
    std::vector<std::byte> out(count * header_.sample_size);
    read_at(out.data(), out.size(), kStoreHeaderBytes + start * header_.sample_size);
    return out;
}

const char* pattern_name(AccessPattern pattern) {
    switch (pattern) {
        case AccessPattern::Random: return "random";
        case AccessPattern::SequentialStride: return "sequential-stride";
        case AccessPattern::ChunkCycle: return "chunk-cycle";
        case AccessPattern::FullChunk: return "full-chunk";
    }
    return "?";
}

BenchResult bench_pattern(const Store& store, AccessPattern pattern, std::uint32_t procs,
                          std::uint64_t seed) {
    if (procs == 0) throw ValidationError("bench_pattern: procs must be >= 1");
    const std::uint64_t count = store.sample_count();
    if (count % procs != 0)
        throw ValidationError("bench_pattern: sample_count must be divisible by procs");
    const std::uint64_t per_proc = count / procs;
    const std::uint64_t size = store.sample_size();

    BenchResult result;
    result.pattern = pattern;
    result.procs = procs;
    result.reads.reserve(pattern == AccessPattern::FullChunk ? procs : count);

    auto offset_of = [size](std::uint64_t index) { return kStoreHeaderBytes + index * size; };

    const auto t0 = std::chrono::steady_clock::now();
    switch (pattern) {
        case AccessPattern::Random: {
            std::vector<std::uint64_t> order(count);
            std::iota(order.begin(), order.end(), 0);
            SplitMix64 rng(seed);
            fisher_yates_shuffle(order, rng);
            for (std::uint32_t p = 0; p < procs; ++p) {
                for (std::uint64_t i = 0; i < per_proc; ++i) {
                    const std::uint64_t idx = order[std::uint64_t(p) * per_proc + i];
                    store.read_one(idx);
                    result.reads.push_back({p, offset_of(idx), size});
                }
            }
            break;
        }
        case AccessPattern::SequentialStride: {
            for (std::uint32_t p = 0; p < procs; ++p) {
                for (std::uint64_t idx = p; idx < count; idx += procs) {
                    store.read_one(idx);
                    result.reads.push_back({p, offset_of(idx), size});
                }
            }
            break;
        }
        case AccessPattern::ChunkCycle: {
            for (std::uint32_t p = 0; p < procs; ++p) {
                for (std::uint64_t i = 0; i < per_proc; ++i) {
                    const std::uint64_t idx = std::uint64_t(p) * per_proc + i;
                    store.read_one(idx);
                    result.reads.push_back({p, offset_of(idx), size});
                }
            }
            break;
        }
        case AccessPattern::FullChunk: {
            for (std::uint32_t p = 0; p < procs; ++p) {
                const std::uint64_t start = std::uint64_t(p) * per_proc;
                store.read_chunk(start, per_proc);
                result.reads.push_back({p, offset_of(start), per_proc * size});
            }
            break;
        }
    }
    const auto t1 = std::chrono::steady_clock::now();
    result.seconds = std::chrono::duration<double>(t1 - t0).count();
    return result;
}

std::vector<BenchResult> bench_all_patterns(const Store& store, std::uint32_t procs,
                                            std::uint64_t seed) {
    return {
        bench_pattern(store, AccessPattern::Random, procs, seed),
        bench_pattern(store, AccessPattern::SequentialStride, procs, seed),
        bench_pattern(store, AccessPattern::ChunkCycle, procs, seed),
        bench_pattern(store, AccessPattern::FullChunk, procs, seed),
    };
}

} // namespace loadsched
