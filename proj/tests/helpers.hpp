#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ponzi/types.hpp"

namespace testutil {

// Deterministic generator for property tests; seeds are fixed per test.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    std::vector<std::uint8_t> bytes(std::size_t len, unsigned alphabet = 256) {
        std::vector<std::uint8_t> out(len);
        for (auto& b : out) b = static_cast<std::uint8_t>(below(alphabet));
        return out;
    }
};

// Deterministic distinct addresses: 0x00..00<index as last bytes>.
inline ponzi::Address addr(std::uint64_t index) {
    ponzi::Address a;
    for (int i = 0; i < 8; ++i)
        a.bytes[19 - i] = static_cast<std::uint8_t>(index >> (8 * i));
    a.bytes[0] = 0x10; // keep clear of the null address
    return a;
}

inline ponzi::Wei eth(std::uint64_t n) { return ponzi::Wei(n) * ponzi::kWeiPerEth; }
// 1 milli-ETH = 10^15 wei
inline ponzi::Wei milli_eth(std::uint64_t n) { return ponzi::Wei(n) * 1'000'000'000'000'000ULL; }

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("ponzilab-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace testutil
