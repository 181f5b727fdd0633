#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "ponzi/types.hpp"

namespace ponzi::similarity {

using Bytes = std::vector<std::uint8_t>;
using BytesView = std::span<const std::uint8_t>;

struct BytecodeBlob {
    Address address;
    Bytes bytes; // non-empty
};

enum class NldVariant {
    kMetric, // 2L / (|a| + |b| + L); a true metric on [0,1)
    kMaxLen, // L / max(|a|, |b|); common but violates the triangle inequality
};

struct SimilarityConfig {
    double threshold = 0.35;
    std::size_t sample_pairs = 1000;
    std::uint64_t rng_seed = 0;
    std::size_t fp_neighbor_limit = 100;
    NldVariant variant = NldVariant::kMetric;
    std::size_t workers = 1;
};

struct BaselineEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

struct ClassifyHit {
    Address address;
    double min_nld = 0.0;
    Address nearest_seed;
};

struct FpSuspect {
    Address address;
    std::size_t neighbor_count = 0;
};

// Unit-cost edit distance, two-row DP.
std::size_t levenshtein(BytesView a, BytesView b);

// Band-limited distance. Returns the exact distance when it is <= band,
// nullopt when the exact distance provably exceeds the band.
std::optional<std::size_t> levenshtein_within(BytesView a, BytesView b, std::size_t band);

// Normalized distance in [0,1); 0 iff a == b (both-empty counts as equal).
double nld(BytesView a, BytesView b, NldVariant variant = NldVariant::kMetric);

double nld_from_distance(std::size_t distance, std::size_t len_a, std::size_t len_b,
                         NldVariant variant = NldVariant::kMetric);

// Computes nld(a,b) only if it is < threshold, pruning the DP once the
// distance provably forces nld >= threshold.
std::optional<double> nld_below(BytesView a, BytesView b, double threshold,
                                NldVariant variant = NldVariant::kMetric);

// Monte Carlo mean NLD over unordered pairs of distinct corpus entries,
// sampled with replacement from a seeded generator. Deterministic for a
// fixed (corpus, config).
BaselineEstimate estimate_baseline(const std::vector<BytecodeBlob>& corpus,
                                   const SimilarityConfig& cfg);

// Mean NLD over every unordered pair; the oracle the Monte Carlo estimate
// is checked against.
BaselineEstimate exhaustive_baseline(const std::vector<BytecodeBlob>& corpus,
                                     std::size_t workers = 1);

// Flags corpus entries whose min NLD to any seed is < cfg.threshold.
// Entries sharing an address with a seed are skipped. Ties on the nearest
// seed go to the lowest seed address; output sorted by (min_nld, address).
std::vector<ClassifyHit> classify(const std::vector<BytecodeBlob>& corpus,
                                  const std::vector<BytecodeBlob>& seeds,
                                  const SimilarityConfig& cfg);

// False-positive pass: counts, for each flagged blob, the corpus blobs
// (other than itself) within cfg.threshold. Entries with more than
// cfg.fp_neighbor_limit neighbors are suspect generic code, sorted by
// descending count.
std::vector<FpSuspect> fp_pass(const std::vector<BytecodeBlob>& flagged,
                               const std::vector<BytecodeBlob>& corpus,
                               const SimilarityConfig& cfg);

// Reads every <address>.hex file in a directory (hex payload, optional
// trailing whitespace). Result sorted by address.
std::vector<BytecodeBlob> load_corpus_dir(const std::filesystem::path& dir);

Bytes decode_hex(std::string_view hex, const std::string& source_name);

} // namespace ponzi::similarity
