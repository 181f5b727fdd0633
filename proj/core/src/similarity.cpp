#include "ponzi/similarity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

namespace ponzi::similarity {

namespace {

// Counter-based generator (splitmix64): bit-reproducible sampling on any
// platform, unlike the standard distributions.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Lemire reduction; slight bias < 2^-64 is irrelevant here.
    std::size_t bounded(std::size_t n) {
        return static_cast<std::size_t>((u128(next()) * n) >> 64);
    }
};

constexpr std::size_t kExceeds = std::numeric_limits<std::size_t>::max();

template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    std::size_t n_threads = std::min(workers, count);
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace

std::size_t levenshtein(BytesView a, BytesView b) {
    if (a.size() < b.size()) std::swap(a, b); // b is the shorter row
    if (b.empty()) return a.size();

    // 32-bit cells: distances are bounded by the longer input, and EVM
    // bytecode tops out in the tens of kilobytes.
    std::vector<std::uint32_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = static_cast<std::uint32_t>(j);

    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::uint32_t diag = row[0];
        row[0] = static_cast<std::uint32_t>(i);
        const std::uint8_t ca = a[i - 1];
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::uint32_t sub = diag + (ca != b[j - 1] ? 1 : 0);
            diag = row[j];
            row[j] = std::min({diag + 1, row[j - 1] + 1, sub});
        }
    }
    return row[b.size()];
}

std::optional<std::size_t> levenshtein_within(BytesView a, BytesView b, std::size_t band) {
    if (a.size() < b.size()) std::swap(a, b);
    const std::size_t n = a.size(), m = b.size();
    if (n - m > band) return std::nullopt; // |len difference| lower-bounds L
    if (m == 0) return n;

    // Cells with |i - j| > band cannot lie on a path of cost <= band, so the
    // DP only sweeps the diagonal window; cells outside it read as kExceeds.
    std::vector<std::size_t> row(m + 1, kExceeds);
    for (std::size_t j = 0; j <= std::min(m, band); ++j) row[j] = j;

    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t hi = std::min(m, i + band);
        std::size_t lo, diag, left, row_min;
        if (i <= band) { // column 0 still inside the window
            lo = 1;
            diag = row[0]; // (i-1, 0)
            row[0] = i;
            left = i;
            row_min = i;
        } else {
            lo = i - band;
            diag = row[lo - 1]; // (i-1, lo-1), the column that just left the window
            left = kExceeds;
            row_min = kExceeds;
        }
        for (std::size_t j = lo; j <= hi; ++j) {
            std::size_t up = row[j]; // (i-1, j); kExceeds when outside the previous window
            std::size_t best = diag + (a[i - 1] != b[j - 1] ? 1 : 0);
            if (up != kExceeds && up + 1 < best) best = up + 1;
            if (left != kExceeds && left + 1 < best) best = left + 1;
            diag = up;
            row[j] = best;
            left = best;
            row_min = std::min(row_min, best);
        }
        if (row_min > band) return std::nullopt; // every path already exceeds the band
    }
    std::size_t result = row[m];
    if (result > band) return std::nullopt;
    return result;
}

double nld_from_distance(std::size_t distance, std::size_t len_a, std::size_t len_b,
                         NldVariant variant) {
    if (len_a == 0 && len_b == 0) return 0.0;
    double l = static_cast<double>(distance);
    if (variant == NldVariant::kMetric)
        return 2.0 * l / (static_cast<double>(len_a + len_b) + l);
    return l / static_cast<double>(std::max(len_a, len_b));
}

double nld(BytesView a, BytesView b, NldVariant variant) {
    return nld_from_distance(levenshtein(a, b), a.size(), b.size(), variant);
}

std::optional<double> nld_below(BytesView a, BytesView b, double threshold, NldVariant variant) {
    if (a.empty() && b.empty()) return threshold > 0.0 ? std::optional<double>(0.0) : std::nullopt;
    // Largest L still compatible with nld < threshold:
    //   metric:  2L/(s+L) < t  <=>  L < t*s/(2-t)      (s = |a|+|b|)
    //   max-len: L/max < t     <=>  L < t*max
    double bound = variant == NldVariant::kMetric
                       ? threshold * static_cast<double>(a.size() + b.size()) / (2.0 - threshold)
                       : threshold * static_cast<double>(std::max(a.size(), b.size()));
    if (bound < 0) return std::nullopt;
    // +1 pads against FP rounding of the bound; the exact comparison below
    // re-filters anything the padding let through.
    std::size_t band = static_cast<std::size_t>(bound) + 1;
    auto distance = levenshtein_within(a, b, band);
    if (!distance) return std::nullopt;
    double v = nld_from_distance(*distance, a.size(), b.size(), variant);
    if (v < threshold) return v;
    return std::nullopt;
}

BaselineEstimate estimate_baseline(const std::vector<BytecodeBlob>& corpus,
                                   const SimilarityConfig& cfg) {
    if (corpus.size() < 2) throw Error("baseline needs at least 2 corpus entries");
    if (cfg.sample_pairs == 0) throw Error("baseline needs at least 1 sample pair");

    SplitMix64 rng(cfg.rng_seed);
    struct Pair { std::size_t i, j; };
    std::vector<Pair> pairs(cfg.sample_pairs);
    for (auto& p : pairs) {
        p.i = rng.bounded(corpus.size());
        p.j = rng.bounded(corpus.size() - 1);
        if (p.j >= p.i) ++p.j;
    }

    std::vector<double> values(pairs.size());
    parallel_for(pairs.size(), cfg.workers, [&](std::size_t k) {
        values[k] = nld(corpus[pairs[k].i].bytes, corpus[pairs[k].j].bytes, cfg.variant);
    });

    BaselineEstimate est;
    est.samples = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    est.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - est.mean) * (v - est.mean);
        double var = ss / static_cast<double>(values.size() - 1);
        est.std_error = std::sqrt(var / static_cast<double>(values.size()));
    }
    return est;
}

BaselineEstimate exhaustive_baseline(const std::vector<BytecodeBlob>& corpus,
                                     std::size_t workers) {
    if (corpus.size() < 2) throw Error("baseline needs at least 2 corpus entries");
    const std::size_t n = corpus.size();
    std::vector<double> row_sums(n, 0.0);
    std::vector<std::size_t> row_counts(n, 0);
    parallel_for(n, workers, [&](std::size_t i) {
        double sum = 0.0;
        for (std::size_t j = i + 1; j < n; ++j)
            sum += nld(corpus[i].bytes, corpus[j].bytes);
        row_sums[i] = sum;
        row_counts[i] = n - 1 - i;
    });
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total += row_sums[i];
        count += row_counts[i];
    }
    BaselineEstimate est;
    est.samples = count;
    est.mean = total / static_cast<double>(count);
    est.std_error = 0.0; // population mean, not an estimate
    return est;
}

std::vector<ClassifyHit> classify(const std::vector<BytecodeBlob>& corpus,
                                  const std::vector<BytecodeBlob>& seeds,
                                  const SimilarityConfig& cfg) {
    if (seeds.empty()) throw Error("classify needs a non-empty seed set");
    if (cfg.threshold <= 0.0 || cfg.threshold >= 1.0)
        throw Error("threshold must lie in (0,1)");

    std::vector<const BytecodeBlob*> sorted_seeds;
    sorted_seeds.reserve(seeds.size());
    for (const auto& s : seeds) sorted_seeds.push_back(&s);
    std::sort(sorted_seeds.begin(), sorted_seeds.end(),
              [](const BytecodeBlob* a, const BytecodeBlob* b) { return a->address < b->address; });

    std::vector<Address> seed_addrs;
    seed_addrs.reserve(seeds.size());
    for (const auto* s : sorted_seeds) seed_addrs.push_back(s->address);

    std::vector<std::optional<ClassifyHit>> hits(corpus.size());
    parallel_for(corpus.size(), cfg.workers, [&](std::size_t idx) {
        const auto& blob = corpus[idx];
        if (std::binary_search(seed_addrs.begin(), seed_addrs.end(), blob.address))
            return; // corpus entry that *is* a seed
        double best = cfg.threshold;
        const BytecodeBlob* arg = nullptr;
        for (const auto* seed : sorted_seeds) {
            // Seeds are visited in address order and only a strictly smaller
            // distance replaces the best, so equal-distance ties keep the
            // lowest seed address.
            auto v = nld_below(blob.bytes, seed->bytes, best, cfg.variant);
            if (v) {
                best = *v;
                arg = seed;
            }
        }
        if (arg) hits[idx] = ClassifyHit{blob.address, best, arg->address};
    });

    std::vector<ClassifyHit> result;
    for (auto& h : hits)
        if (h) result.push_back(*h);
    std::sort(result.begin(), result.end(), [](const ClassifyHit& a, const ClassifyHit& b) {
        if (a.min_nld != b.min_nld) return a.min_nld < b.min_nld;
        return a.address < b.address;
    });
    return result;
}

std::vector<FpSuspect> fp_pass(const std::vector<BytecodeBlob>& flagged,
                               const std::vector<BytecodeBlob>& corpus,
                               const SimilarityConfig& cfg) {
    std::vector<std::size_t> counts(flagged.size(), 0);
    parallel_for(flagged.size(), cfg.workers, [&](std::size_t idx) {
        const auto& f = flagged[idx];
        std::size_t count = 0;
        for (const auto& c : corpus) {
            if (c.address == f.address) continue;
            if (nld_below(c.bytes, f.bytes, cfg.threshold, cfg.variant)) ++count;
        }
        counts[idx] = count;
    });

    std::vector<FpSuspect> suspects;
    for (std::size_t i = 0; i < flagged.size(); ++i)
        if (counts[i] > cfg.fp_neighbor_limit)
            suspects.push_back(FpSuspect{flagged[i].address, counts[i]});
    std::sort(suspects.begin(), suspects.end(), [](const FpSuspect& a, const FpSuspect& b) {
        if (a.neighbor_count != b.neighbor_count) return a.neighbor_count > b.neighbor_count;
        return a.address < b.address;
    });
    return suspects;
}

Bytes decode_hex(std::string_view hex, const std::string& source_name) {
    while (!hex.empty() && (hex.back() == '\n' || hex.back() == '\r' || hex.back() == ' ' ||
                            hex.back() == '\t'))
        hex.remove_suffix(1);
    if (hex.size() >= 2 && hex[0] == '0' && hex[1] == 'x') hex.remove_prefix(2);
    if (hex.empty()) throw Error(source_name + ": empty bytecode");
    if (hex.size() % 2 != 0) throw Error(source_name + ": odd hex digit count");
    auto digit = [&](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw Error(source_name + ": bad hex digit '" + std::string(1, c) + "'");
    };
    Bytes bytes(hex.size() / 2);
    for (std::size_t i = 0; i < bytes.size(); ++i)
        bytes[i] = static_cast<std::uint8_t>(digit(hex[2 * i]) << 4 | digit(hex[2 * i + 1]));
    return bytes;
}

std::vector<BytecodeBlob> load_corpus_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw Error("corpus directory not found: " + dir.string());
    std::vector<BytecodeBlob> corpus;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".hex") continue;
        std::string stem = entry.path().stem().string();
        auto addr = Address::try_parse(stem);
        if (!addr && stem.size() == 40) addr = Address::try_parse("0x" + stem);
        if (!addr)
            throw Error(entry.path().string() + ": file name is not an address");
        std::ifstream in(entry.path(), std::ios::binary);
        if (!in) throw Error("cannot open " + entry.path().string());
        std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        corpus.push_back(BytecodeBlob{*addr, decode_hex(content, entry.path().string())});
    }
    std::sort(corpus.begin(), corpus.end(),
              [](const BytecodeBlob& a, const BytecodeBlob& b) { return a.address < b.address; });
    for (std::size_t i = 1; i < corpus.size(); ++i)
        if (corpus[i].address == corpus[i - 1].address)
            throw Error("duplicate corpus address " + corpus[i].address.str());
    return corpus;
}

} // namespace ponzi::similarity
