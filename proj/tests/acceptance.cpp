// Acceptance suite: each criterion prints one PASS/FAIL line; the process
// exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include "ponzi/attacks.hpp"
#include "ponzi/ledger.hpp"
#include "ponzi/metrics.hpp"
#include "ponzi/rational.hpp"
#include "ponzi/schemes.hpp"
#include "ponzi/similarity.hpp"

using namespace ponzi;

namespace {

struct CheckFail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
    if (!cond) throw CheckFail(what);
}

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

Address addr(std::uint64_t index) {
    Address a;
    for (int i = 0; i < 8; ++i) a.bytes[19 - i] = static_cast<std::uint8_t>(index >> (8 * i));
    a.bytes[0] = 0x10;
    return a;
}

Wei eth(std::uint64_t n) { return Wei(n) * kWeiPerEth; }

const Address kScheme = addr(9000);
const Address kOwner = addr(9001);

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// -- independent oracles ----------------------------------------------------

std::size_t lev_naive(similarity::BytesView a, similarity::BytesView b) {
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::vector<std::vector<std::size_t>> memo(a.size() + 1,
                                               std::vector<std::size_t>(b.size() + 1, kUnset));
    auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> std::size_t {
        if (i == 0) return j;
        if (j == 0) return i;
        if (memo[i][j] != kUnset) return memo[i][j];
        std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
        return memo[i][j] = std::min({self(self, i - 1, j) + 1, self(self, i, j - 1) + 1,
                                      self(self, i - 1, j - 1) + cost});
    };
    return rec(rec, a.size(), b.size());
}

Rat nld_exact(std::size_t d, std::size_t la, std::size_t lb) {
    if (la + lb == 0) return Rat(0);
    return Rat(BigInt(2 * d), BigInt(la + lb + d));
}

Rat gini_pairwise(const std::vector<Rat>& values) {
    Rat sum_abs, total;
    for (const auto& x : values) total += x;
    for (const auto& x : values)
        for (const auto& y : values) sum_abs += x > y ? x - y : y - x;
    std::size_t n = values.size();
    return Rat(100) * sum_abs / (Rat(BigInt(2 * n * n)) * (total / Rat(BigInt(n))));
}

// -- criteria ----------------------------------------------------------------

void c01_ponzi_banzai() {
    std::string a = "Ponzi", b = "Banzai";
    auto bytes = [](const std::string& s) {
        return similarity::Bytes(s.begin(), s.end());
    };
    require(similarity::levenshtein(bytes(a), bytes(b)) == 3, "levenshtein(Ponzi,Banzai) != 3");
}

void c02_metric_axioms() {
    Rng rng(202);
    for (int iter = 0; iter < 10'000; ++iter) {
        auto a = rng.bytes(rng.below(65));
        auto b = rng.bytes(rng.below(65));
        auto c = rng.bytes(rng.below(65));
        require(similarity::nld(a, a) == 0.0, "identity violated");
        double ab = similarity::nld(a, b);
        require(similarity::nld(b, a) == ab, "symmetry violated");
        require(ab >= 0.0 && ab <= 1.0, "range violated");
        if (!a.empty() && !b.empty()) require(ab < 1.0, "range violated (both non-empty)");
        if (a != b) require(ab > 0.0, "separation violated");

        Rat rab = nld_exact(similarity::levenshtein(a, b), a.size(), b.size());
        Rat rbc = nld_exact(similarity::levenshtein(b, c), b.size(), c.size());
        Rat rac = nld_exact(similarity::levenshtein(a, c), a.size(), c.size());
        require(rac <= rab + rbc, "triangle inequality violated");
    }
}

void c03_oracle_equivalence() {
    Rng rng(203);
    for (int iter = 0; iter < 10'000; ++iter) {
        auto a = rng.bytes(rng.below(13), 3);
        auto b = rng.bytes(rng.below(13), 3);
        std::size_t expected = lev_naive(a, b);
        require(similarity::levenshtein(a, b) == expected, "optimized != naive oracle");

        std::size_t band = rng.below(14);
        auto banded = similarity::levenshtein_within(a, b, band);
        if (banded) {
            require(*banded == expected && *banded <= band, "banded value wrong");
        } else {
            require(expected > band, "banded early-exit unsound");
        }
    }
}

void c04_planted_clones() {
    Rng rng(204);
    std::vector<similarity::BytecodeBlob> seeds;
    for (std::uint64_t s = 0; s < 10; ++s)
        seeds.push_back({addr(100 + s), rng.bytes(1000)});

    std::vector<similarity::BytecodeBlob> corpus;
    std::set<Address> clone_addrs;
    for (std::uint64_t s = 0; s < 10; ++s) {
        auto clone = seeds[s].bytes; // <= 5% byte substitutions
        for (int e = 0; e < 50; ++e)
            clone[rng.below(clone.size())] = static_cast<std::uint8_t>(rng.next());
        corpus.push_back({addr(1000 + s), clone});
        clone_addrs.insert(addr(1000 + s));
    }
    for (std::uint64_t i = 0; i < 200; ++i)
        corpus.push_back({addr(2000 + i), rng.bytes(1000)});

    similarity::SimilarityConfig cfg;
    cfg.threshold = 0.35;
    cfg.workers = workers();
    auto hits = similarity::classify(corpus, seeds, cfg);
    require(hits.size() == 10, "expected exactly the 10 clones, got " +
                                   std::to_string(hits.size()));
    for (const auto& h : hits)
        require(clone_addrs.contains(h.address), "an unrelated blob was flagged");

    cfg.sample_pairs = 2000;
    cfg.rng_seed = 20'240'401;
    auto mc = similarity::estimate_baseline(corpus, cfg);
    auto exact = similarity::exhaustive_baseline(corpus, workers());
    double diff = std::abs(mc.mean - exact.mean);
    require(diff <= 3.0 * mc.std_error,
            "baseline off by " + std::to_string(diff) + " > 3 SE (" +
                std::to_string(3.0 * mc.std_error) + ")");
}

void c05_determinism() {
    Rng rng(205);
    std::vector<similarity::BytecodeBlob> seeds{{addr(1), rng.bytes(500)}};
    std::vector<similarity::BytecodeBlob> corpus;
    for (std::uint64_t i = 0; i < 40; ++i) {
        auto blob = seeds[0].bytes;
        for (std::uint64_t e = 0; e < rng.below(400); ++e)
            blob[rng.below(blob.size())] = static_cast<std::uint8_t>(rng.next());
        corpus.push_back({addr(10 + i), blob});
    }
    similarity::SimilarityConfig cfg;
    cfg.rng_seed = 77;
    cfg.sample_pairs = 300;
    cfg.workers = workers();

    auto serialize = [](const std::vector<similarity::ClassifyHit>& hits) {
        std::ostringstream out;
        for (const auto& h : hits) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", h.min_nld);
            out << h.address.str() << ',' << buf << ',' << h.nearest_seed.str() << '\n';
        }
        return out.str();
    };
    require(serialize(similarity::classify(corpus, seeds, cfg)) ==
                serialize(similarity::classify(corpus, seeds, cfg)),
            "classify not byte-identical across runs");

    auto e1 = similarity::estimate_baseline(corpus, cfg);
    auto e2 = similarity::estimate_baseline(corpus, cfg);
    require(e1.mean == e2.mean && e1.std_error == e2.std_error && e1.samples == e2.samples,
            "estimate_baseline not bit-identical across runs");
}

void c06_conservation_fuzz() {
    Rng rng(206);
    const sim::Archetype archetypes[] = {sim::Archetype::kArray, sim::Archetype::kTree,
                                         sim::Archetype::kHandover, sim::Archetype::kWaterfall,
                                         sim::Archetype::kHyipDaily};
    for (sim::Archetype arch : archetypes) {
        for (int iter = 0; iter < 1000; ++iter) {
            sim::SchemeParams p;
            p.archetype = arch;
            p.multiplier = {1 + rng.below(4), 1};
            p.owner_fee = {rng.below(11), 10};
            p.min_toll = Wei(rng.below(2'000'000'000)) * 1'000'000'000ULL;
            p.payout_rate = {rng.below(25), 100};
            p.price_growth = {3, 2};
            p.initial_price = Wei(1 + rng.below(2'000'000'000)) * 1'000'000'000ULL;
            p.reject_policy = rng.below(2) ? sim::RejectPolicy::kRefund : sim::RejectPolicy::kKeep;
            p.first_deposit_to_owner = rng.below(2) == 0;
            if (rng.below(2)) p.bugs |= sim::kUncheckedSend;
            if (rng.below(3) == 0) p.bugs |= sim::kAccumulatingFees;
            if (rng.below(3) == 0) p.bugs |= sim::kCursorNotReset;
            if (rng.below(3) == 0) p.bugs |= sim::kOpenConstructor;

            Address poison = addr(4);
            sim::FailureOracle fails = [&](const Address& to) { return to == poison; };

            std::vector<sim::SimEvent> events;
            UnixSeconds at = 0;
            std::size_t n = rng.below(30);
            for (std::size_t i = 0; i < n; ++i) {
                at += static_cast<UnixSeconds>(rng.below(90'000));
                if (arch == sim::Archetype::kHyipDaily && rng.below(4) == 0) {
                    events.push_back(sim::SimEvent::daily_tick(at));
                } else if (rng.below(8) == 0) {
                    events.push_back(sim::SimEvent::owner_withdraw(at));
                } else {
                    events.push_back(sim::SimEvent::deposit(
                        at, addr(1 + rng.below(10)),
                        Wei(rng.below(4'000'000'000)) * 1'000'000'000ULL,
                        rng.below(2) ? std::optional<Address>(addr(1 + rng.below(10)))
                                     : std::optional<Address>(kOwner)));
                }
            }
            auto result = sim::run_with_state(kScheme, kOwner, p, events, fails);
            ConservationCheck check;
            auto breach = verify_conservation(result.trace, kScheme, &check);
            require(!breach, breach ? *breach : "");
            require(check.total_out <= check.total_in, "out exceeds in");
            require(check.balance == result.state.balance,
                    "trace balance != simulator balance");
        }
    }
}

void c07_wait_law() {
    sim::SchemeParams p;
    p.archetype = sim::Archetype::kArray;
    p.multiplier = {2, 1};
    p.min_toll = eth(1);
    p.first_deposit_to_owner = true;

    const std::uint64_t max_k = 1024;
    std::vector<sim::SimEvent> events;
    for (std::uint64_t i = 1; i <= 2 * max_k + 1; ++i)
        events.push_back(sim::SimEvent::deposit(static_cast<UnixSeconds>(i), addr(i), eth(1)));
    auto trace = sim::run(kScheme, kOwner, p, events);

    std::vector<std::uint64_t> paid_at(max_k + 1, 0);
    for (const auto& tx : trace) {
        if (!tx.is_internal || tx.is_error || tx.to == kOwner) continue;
        std::uint64_t k = tx.to.bytes[19] | std::uint64_t(tx.to.bytes[18]) << 8;
        if (k <= max_k) paid_at[k] = tx.block_number;
    }
    for (std::uint64_t k = 1; k <= max_k; ++k) {
        require(paid_at[k] != 0, "user " + std::to_string(k) + " never paid");
        require(paid_at[k] - k == attacks::payout_wait(k),
                "user " + std::to_string(k) + " waited " + std::to_string(paid_at[k] - k) +
                    " joiners, expected " + std::to_string(k + 1));
    }
}

void c08_waterfall_16() {
    sim::SchemeParams p;
    p.archetype = sim::Archetype::kWaterfall;
    p.payout_rate = {6, 100};

    sim::SimState st = sim::make_state(kScheme, kOwner, p);
    for (std::uint64_t i = 0; i < 30; ++i)
        sim::step(st, p, sim::SimEvent::deposit(static_cast<UnixSeconds>(i), addr(1 + i), eth(1)));

    // every further 1 ETH deposit pays exactly 16 earlier users 0.06 ETH
    for (int extra = 0; extra < 10; ++extra) {
        Wei balance_before = st.balance;
        auto transfers = sim::step(
            st, p, sim::SimEvent::deposit(100 + extra, addr(100 + extra), eth(1)));
        require(transfers.size() == 16,
                "deposit paid " + std::to_string(transfers.size()) + " users, expected 16");
        for (std::size_t i = 0; i < transfers.size(); ++i) {
            require(transfers[i].amount == eth(1) * 6 / 100, "payment is not 0.06 ETH");
            require(transfers[i].to == addr(1 + i), "payments must start from the list head");
        }
        require(st.balance == balance_before + eth(1) - 16 * (eth(1) * 6 / 100),
                "retained amount is not 0.04 ETH");
    }
}

void c09_shutdown() {
    attacks::ShutdownScenario s;
    s.scheme = kScheme;
    s.owner = kOwner;
    s.params.archetype = sim::Archetype::kArray;
    s.params.multiplier = {2, 1};
    s.oscar = addr(500);
    s.oscar_amount = eth(100);
    auto report = attacks::run_shutdown_attack(s);
    require(report.oscar_received == eth(200), "Oscar did not receive exactly 200 ETH");
    require(report.oscar_net == 0, "Oscar's net is not zero");
    require(report.backlog_wei == eth(200), "backlog is not exactly 200 ETH");
}

void c10_dos() {
    attacks::DosScenario s;
    s.scheme = kScheme;
    s.owner = kOwner;
    s.params.archetype = sim::Archetype::kHyipDaily;
    s.params.payout_rate = {1, 100};
    s.params.min_toll = 1'000'000'000'000'000ULL;
    for (std::uint64_t i = 1; i <= 5; ++i)
        s.honest_deposits.push_back({addr(i), eth(1)});
    s.attacker = attacks::AttackerProfile{addr(666), true, eth(1)};
    s.ticks = 10;

    auto checked = attacks::run_dos_attack(s);
    require(checked.frozen, "checked-send scheme not frozen");
    require(checked.outgoing_after_join == 0, "outgoing volume not zero");
    require(checked.final_balance == checked.balance_at_join, "balance changed");

    s.params.bugs = sim::kUncheckedSend;
    auto unchecked = attacks::run_dos_attack(s);
    require(!unchecked.frozen, "unchecked variant should not freeze");
    require(unchecked.honest_payout_count == 50, "honest users were not paid each tick");
    require(unchecked.stranded_attacker_share ==
                Wei(10) * (s.params.min_toll / 100),
            "attacker share not stranded in the contract");
}

void c11_piggy_fee() {
    // oracle: iterate the recurrence directly
    Wei a = eth(1);
    Wei pending = 0;
    int first = 0;
    for (int n = 1; n <= 100 && first == 0; ++n) {
        pending += a / 33;
        if (pending >= a) first = n;
    }
    require(first == 34, "oracle says first fee >= deposit at n=" + std::to_string(first));

    sim::SchemeParams p;
    p.archetype = sim::Archetype::kWaterfall;
    p.owner_fee = {1, 33};
    p.bugs = sim::kAccumulatingFees;
    sim::SimState st = sim::make_state(kScheme, kOwner, p);
    Wei prev = 0;
    int first_sim = 0;
    for (int n = 1; n <= 40; ++n) {
        auto transfers =
            sim::step(st, p, sim::SimEvent::deposit(static_cast<UnixSeconds>(n), addr(n), a));
        require(!transfers.empty() && transfers[0].to == kOwner, "no fee transfer");
        require(transfers[0].amount > prev, "fee sequence not strictly increasing");
        prev = transfers[0].amount;
        if (first_sim == 0 && transfers[0].amount >= a) first_sim = n;
    }
    require(first_sim == 34, "simulated first fee >= deposit at n=" + std::to_string(first_sim));
}

void c12_cursor_bug() {
    sim::SchemeParams p;
    p.archetype = sim::Archetype::kWaterfall;
    p.payout_rate = {6, 100};
    p.bugs = sim::kCursorNotReset;

    sim::SimState st = sim::make_state(kScheme, kOwner, p);
    std::set<Address> ever_paid;
    for (std::uint64_t i = 0; i < 100; ++i) {
        auto transfers = sim::step(
            st, p, sim::SimEvent::deposit(static_cast<UnixSeconds>(i), addr(1 + i), eth(1)));
        require(transfers.size() <= 1, "more than one user paid in a single deposit");
        for (const auto& t : transfers) {
            require(!ever_paid.contains(t.to), "a user was paid twice");
            ever_paid.insert(t.to);
        }
    }
}

void c13_lifetime() {
    auto tx = [](const char* when) {
        return Transaction{1, parse_datetime(when), addr(1), kScheme, 1, false, false};
    };
    require(metrics::lifetime_days({tx("2016-02-23T00:00:00Z"), tx("2016-11-12T23:59:59Z")}) ==
                263,
            "2016-02-23 -> 2016-11-12 != 263");
    require(metrics::lifetime_days({tx("2015-09-07T12:00:00Z"), tx("2016-08-28T01:00:00Z")}) ==
                356,
            "2015-09-07 -> 2016-08-28 != 356");
    require(metrics::lifetime_days({tx("2016-04-01T10:00:00Z")}) == 0,
            "single transaction lifetime != 0");
}

void c14_inequality() {
    require(metrics::lorenz({Rat(5), Rat(5), Rat(5)}).gini_pct == Rat(0),
            "constant vector Gini != 0");
    require(metrics::lorenz({Rat(0), Rat(0), Rat(0), Rat(7)}).gini_pct == Rat(75),
            "one-nonzero-of-4 Gini != 75");

    Rng rng(214);
    for (int iter = 0; iter < 500; ++iter) {
        std::vector<Rat> values;
        std::size_t n = 1 + rng.below(40);
        for (std::size_t i = 0; i < n; ++i) values.push_back(Rat(BigInt(rng.below(10'000))));
        bool any = false;
        for (const auto& v : values) any |= v > 0;
        if (!any) values[0] = Rat(3);

        auto curve = metrics::lorenz(values);
        require(curve.points.front().population_pct == 0 && curve.points.front().value_pct == 0,
                "curve does not start at (0,0)");
        require(curve.points.back().population_pct == 100 &&
                    curve.points.back().value_pct == 100,
                "curve does not end at (100,100)");
        for (std::size_t i = 1; i < curve.points.size(); ++i) {
            require(curve.points[i].population_pct >= curve.points[i - 1].population_pct &&
                        curve.points[i].value_pct >= curve.points[i - 1].value_pct,
                    "curve not monotone");
            require(curve.points[i].value_pct <= curve.points[i].population_pct,
                    "curve above the diagonal");
        }

        require(curve.gini_pct == gini_pairwise(values), "Gini != pairwise oracle");

        // trapezoid identity, double precision, 1e-9 relative
        double area = 0.0;
        for (std::size_t i = 1; i < curve.points.size(); ++i) {
            double w = to_double(curve.points[i].population_pct) -
                       to_double(curve.points[i - 1].population_pct);
            double h = (to_double(curve.points[i].value_pct) +
                        to_double(curve.points[i - 1].value_pct)) /
                       2.0;
            area += w * h;
        }
        area /= 10'000.0;
        double expected = 100.0 * (1.0 - 2.0 * area);
        double actual = to_double(curve.gini_pct);
        double tol = 1e-9 * std::max(1.0, std::abs(expected));
        require(std::abs(actual - expected) <= tol, "Gini != 100*(1-2*area) within 1e-9");
    }
}

void c15_crossfoot() {
    // simulate a fee-bearing waterfall, serialize, reload, analyze
    sim::SchemeParams p;
    p.archetype = sim::Archetype::kWaterfall;
    p.payout_rate = {6, 100};
    p.owner_fee = {1, 10};

    std::vector<sim::SimEvent> events;
    Rng rng(215);
    UnixSeconds at = parse_datetime("2016-03-01T00:00:00Z");
    for (std::uint64_t i = 0; i < 40; ++i) {
        at += 30'000 + static_cast<UnixSeconds>(rng.below(90'000));
        events.push_back(sim::SimEvent::deposit(at, addr(1 + rng.below(15)), eth(1 + rng.below(3))));
    }
    auto trace = sim::run(kScheme, kOwner, p, events);

    std::ostringstream buffer;
    save_transactions(buffer, trace);
    std::istringstream input(buffer.str());
    auto reloaded = parse_transactions(input, "trace.csv");
    require(reloaded == trace, "trace did not survive serialization");

    RateTable rates;
    EpochDay first_day = day_of(reloaded.front().timestamp);
    for (EpochDay d = first_day; d <= day_of(reloaded.back().timestamp); ++d)
        rates.insert(d, Rat(BigInt(25 + (d - first_day)), BigInt(10)));

    auto summary = metrics::flow_summary(reloaded, kScheme, rates);
    auto volume = metrics::daily_volume(reloaded, kScheme, rates);
    Rat vol_in, vol_out;
    for (const auto& row : volume) {
        vol_in += row.in_usd;
        vol_out += row.out_usd;
    }
    require(vol_in == summary.in_usd, "daily in-volume != flow summary (exact)");
    require(vol_out == summary.out_usd, "daily out-volume != flow summary (exact)");

    // every address in this trace is a user, so the net sum reconciles with
    // the full out - in
    auto nets = metrics::user_nets(reloaded, kScheme, rates);
    Rat net_sum;
    for (const auto& n : nets) net_sum += n.net_usd;
    require(net_sum == summary.out_usd - summary.in_usd,
            "sum of user nets != out - in (exact)");
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<void()> body;
    };
    const std::vector<Criterion> criteria = {
        {1, "levenshtein(\"Ponzi\",\"Banzai\") = 3", c01_ponzi_banzai},
        {2, "NLD metric axioms on 10^4 random triples", c02_metric_axioms},
        {3, "optimized Levenshtein = naive oracle; banded early-exit sound", c03_oracle_equivalence},
        {4, "planted-clone classification and Monte Carlo baseline", c04_planted_clones},
        {5, "classify/baseline bit-reproducible for a fixed seed", c05_determinism},
        {6, "simulator conservation on 1000 random scenarios per archetype", c06_conservation_fuzz},
        {7, "doubler wait law: k+1 joiners, exhaustive k <= 1024", c07_wait_law},
        {8, "waterfall pays exactly 16 users per 1 ETH deposit", c08_waterfall_16},
        {9, "shutdown attack: Oscar repaid 200 ETH, backlog 200 ETH", c09_shutdown},
        {10, "DoS: checked sends freeze, unchecked sends strand the attacker", c10_dos},
        {11, "accumulating fee: increasing, crosses the deposit at n = 34", c11_piggy_fee},
        {12, "cursor bug: at most one user paid per deposit", c12_cursor_bug},
        {13, "lifetimes: 263 days, 356 days, single-tx 0 days", c13_lifetime},
        {14, "inequality suite: Gini values, trapezoid identity, Lorenz shape", c14_inequality},
        {15, "end-to-end cross-foot: volume sums and user nets reconcile", c15_crossfoot},
    };

    bool all_ok = true;
    for (const auto& criterion : criteria) {
        auto start = std::chrono::steady_clock::now();
        try {
            criterion.body();
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
            std::printf("[PASS] %2d. %s (%lld ms)\n", criterion.id, criterion.title,
                        static_cast<long long>(ms));
        } catch (const std::exception& e) {
            all_ok = false;
            std::printf("[FAIL] %2d. %s: %s\n", criterion.id, criterion.title, e.what());
        }
        std::fflush(stdout);
    }
    return all_ok ? 0 : 1;
}
