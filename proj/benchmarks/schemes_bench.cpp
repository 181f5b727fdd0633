#include <benchmark/benchmark.h>

#include "ponzi/schemes.hpp"

using namespace ponzi;
using namespace ponzi::sim;

namespace {

Address bench_addr(std::uint64_t index) {
    Address a;
    a.bytes[0] = 0x10;
    for (int i = 0; i < 8; ++i) a.bytes[19 - i] = static_cast<std::uint8_t>(index >> (8 * i));
    return a;
}

} // namespace

static void BM_ArrayDoublerRun(benchmark::State& state) {
    SchemeParams p;
    p.archetype = Archetype::kArray;
    p.multiplier = {2, 1};
    p.owner_fee = {1, 10};
    p.min_toll = kWeiPerEth;

    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::vector<SimEvent> events;
    events.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        events.push_back(
            SimEvent::deposit(static_cast<UnixSeconds>(i), bench_addr(1 + i), kWeiPerEth));

    Address scheme = bench_addr(9000), owner = bench_addr(9001);
    for (auto _ : state) benchmark::DoNotOptimize(run(scheme, owner, p, events));
    state.counters["deposits"] =
        benchmark::Counter(static_cast<double>(n) * state.iterations(),
                           benchmark::Counter::kIsRate);
}
BENCHMARK(BM_ArrayDoublerRun)->Arg(1024)->Arg(16384);

static void BM_HyipTick(benchmark::State& state) {
    SchemeParams p;
    p.archetype = Archetype::kHyipDaily;
    p.payout_rate = {1, 100};

    const std::size_t investors = static_cast<std::size_t>(state.range(0));
    SimState st = make_state(bench_addr(9000), bench_addr(9001), p);
    for (std::size_t i = 0; i < investors; ++i)
        step(st, p, SimEvent::deposit(static_cast<UnixSeconds>(i), bench_addr(1 + i), kWeiPerEth));
    st.balance += Wei(1'000'000) * kWeiPerEth; // never run dry during the loop

    UnixSeconds at = static_cast<UnixSeconds>(investors);
    for (auto _ : state) {
        auto transfers = step(st, p, SimEvent::daily_tick(++at));
        benchmark::DoNotOptimize(transfers);
    }
    state.counters["payouts"] =
        benchmark::Counter(static_cast<double>(investors) * state.iterations(),
                           benchmark::Counter::kIsRate);
}
BENCHMARK(BM_HyipTick)->Arg(256)->Arg(4096);

BENCHMARK_MAIN();
