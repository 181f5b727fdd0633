#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <thread>

#include "ponzi/attacks.hpp"
#include "ponzi/ledger.hpp"
#include "ponzi/metrics.hpp"
#include "ponzi/rational.hpp"
#include "ponzi/scenario.hpp"
#include "ponzi/schemes.hpp"
#include "ponzi/similarity.hpp"
#include "ponzi/types.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ponzi;

namespace {

#ifndef PONZILAB_VERSION
#define PONZILAB_VERSION "0.1.0"
#endif

// Exit code 2: an internal invariant (conservation) failed, as opposed to
// bad input (exit 1).
struct InvariantBreach : Error {
    using Error::Error;
};

std::string fmt_nld(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

void write_json(const fs::path& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_run_meta(const fs::path& out_dir, const std::string& command, std::uint64_t seed,
                    const json& flags) {
    write_json(out_dir / "run-meta.json", json{{"tool", "ponzilab"},
                                               {"version", PONZILAB_VERSION},
                                               {"command", command},
                                               {"seed", seed},
                                               {"flags", flags}});
}

fs::path ensure_out_dir(const std::string& out) {
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory " + out);
    return dir;
}

Address parse_addr_flag(const std::string& text) {
    auto a = Address::try_parse(text);
    if (!a) throw Error("bad --scheme address '" + text + "'");
    return *a;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed_flag) {
    if (seed_flag) return *seed_flag;
    std::random_device rd;
    std::uint64_t seed = (std::uint64_t(rd()) << 32) | rd();
    std::cout << "seed: " << seed << " (generated; pass --seed to reproduce)\n";
    return seed;
}

// Conservation gate shared by simulate/attack: a breaching trace is a
// simulator bug, not a user error.
void check_trace(const std::vector<Transaction>& trace, const Address& scheme) {
    ConservationCheck check;
    if (auto breach = verify_conservation(trace, scheme, &check))
        throw InvariantBreach("conservation: " + *breach);
    std::cout << "conservation: ok (in=" << to_string(check.total_in)
              << " wei, out=" << to_string(check.total_out)
              << " wei, balance=" << to_string(check.balance) << " wei)\n";
}

struct ClassifyArgs {
    std::string corpus_dir;
    std::string seeds_file;
    std::string out_dir;
    double threshold = 0.35;
    std::size_t fp_limit = 100;
    std::optional<std::uint64_t> seed;
    std::size_t workers = std::thread::hardware_concurrency();
};

int cmd_classify(const ClassifyArgs& args) {
    auto out_dir = ensure_out_dir(args.out_dir);
    std::uint64_t seed = resolve_seed(args.seed);

    auto all_blobs = similarity::load_corpus_dir(args.corpus_dir);
    auto manifest = load_scheme_manifest(args.seeds_file);

    std::set<Address> seed_addrs;
    for (const auto& d : manifest) seed_addrs.insert(d.address);

    std::vector<similarity::BytecodeBlob> seeds, corpus;
    for (auto& blob : all_blobs) {
        if (seed_addrs.contains(blob.address))
            seeds.push_back(std::move(blob));
        else
            corpus.push_back(std::move(blob));
    }
    if (seeds.size() != seed_addrs.size()) {
        for (const auto& d : manifest) {
            bool found = false;
            for (const auto& s : seeds) found |= s.address == d.address;
            if (!found)
                throw Error("seed bytecode missing from corpus: " + d.address.str() + " (" +
                            args.corpus_dir + ")");
        }
    }

    similarity::SimilarityConfig cfg;
    cfg.threshold = args.threshold;
    cfg.fp_neighbor_limit = args.fp_limit;
    cfg.rng_seed = seed;
    cfg.workers = std::max<std::size_t>(1, args.workers);

    auto hits = similarity::classify(corpus, seeds, cfg);
    {
        auto out = open_out(out_dir / "classify.csv");
        out << "address,min_nld,nearest_seed\n";
        for (const auto& h : hits)
            out << h.address.str() << ',' << fmt_nld(h.min_nld) << ',' << h.nearest_seed.str()
                << '\n';
    }

    std::vector<similarity::BytecodeBlob> flagged;
    for (const auto& h : hits)
        for (const auto& blob : corpus)
            if (blob.address == h.address) flagged.push_back(blob);
    auto suspects = similarity::fp_pass(flagged, corpus, cfg);
    {
        auto out = open_out(out_dir / "fp_suspects.csv");
        out << "address,neighbor_count\n";
        for (const auto& s : suspects)
            out << s.address.str() << ',' << s.neighbor_count << '\n';
    }

    write_run_meta(out_dir, "classify", seed,
                   json{{"corpus", args.corpus_dir},
                        {"seeds", args.seeds_file},
                        {"threshold", args.threshold},
                        {"fp_limit", args.fp_limit},
                        {"workers", cfg.workers},
                        {"out", args.out_dir}});
    std::cout << "flagged: " << hits.size() << "\n";
    std::cout << "suspected false positives: " << suspects.size() << "\n";
    return 0;
}

struct BaselineArgs {
    std::string corpus_dir;
    std::string out_dir;
    std::size_t samples = 1000;
    std::optional<std::uint64_t> seed;
    std::size_t workers = std::thread::hardware_concurrency();
};

int cmd_baseline(const BaselineArgs& args) {
    auto out_dir = ensure_out_dir(args.out_dir);
    std::uint64_t seed = resolve_seed(args.seed);

    auto corpus = similarity::load_corpus_dir(args.corpus_dir);
    similarity::SimilarityConfig cfg;
    cfg.sample_pairs = args.samples;
    cfg.rng_seed = seed;
    cfg.workers = std::max<std::size_t>(1, args.workers);

    auto est = similarity::estimate_baseline(corpus, cfg);
    write_json(out_dir / "baseline.json", json{{"mean", est.mean},
                                               {"std_error", est.std_error},
                                               {"samples", est.samples},
                                               {"seed", seed},
                                               {"corpus_size", corpus.size()}});
    write_run_meta(out_dir, "baseline", seed,
                   json{{"corpus", args.corpus_dir},
                        {"samples", args.samples},
                        {"workers", cfg.workers},
                        {"out", args.out_dir}});
    std::cout << "baseline mean nld: " << fmt_nld(est.mean) << " (std error "
              << fmt_nld(est.std_error) << ", " << est.samples << " pairs)\n";
    return 0;
}

struct ScenarioArgs {
    std::string scenario_file;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
};

int cmd_simulate(const ScenarioArgs& args) {
    auto out_dir = ensure_out_dir(args.out_dir);
    std::uint64_t seed = args.seed.value_or(0);

    auto sim_scenario = scenario::load_simulation(args.scenario_file);
    auto result = sim::run_with_state(sim_scenario.scheme, sim_scenario.owner,
                                      sim_scenario.params, sim_scenario.events,
                                      sim_scenario.oracle());
    save_transactions(out_dir / "trace.csv", result.trace);
    check_trace(result.trace, sim_scenario.scheme);

    write_run_meta(out_dir, "simulate", seed,
                   json{{"scenario", args.scenario_file}, {"out", args.out_dir}});
    std::cout << "trace rows: " << result.trace.size() << "\n";
    std::cout << "final balance: " << to_string(result.state.balance) << " wei\n";
    return 0;
}

json params_json(const sim::SchemeParams& p) {
    const char* archetype = "array";
    switch (p.archetype) {
        case sim::Archetype::kArray: archetype = "array"; break;
        case sim::Archetype::kTree: archetype = "tree"; break;
        case sim::Archetype::kHandover: archetype = "handover"; break;
        case sim::Archetype::kWaterfall: archetype = "waterfall"; break;
        case sim::Archetype::kHyipDaily: archetype = "hyip_daily"; break;
    }
    json bugs = json::array();
    if (p.has_bug(sim::kUncheckedSend)) bugs.push_back("unchecked_send");
    if (p.has_bug(sim::kAccumulatingFees)) bugs.push_back("accumulating_fees");
    if (p.has_bug(sim::kCursorNotReset)) bugs.push_back("cursor_not_reset");
    if (p.has_bug(sim::kOpenConstructor)) bugs.push_back("open_constructor");
    if (p.has_bug(sim::kGasLimitedClear)) bugs.push_back("gas_limited_clear");
    return json{{"archetype", archetype},
                {"multiplier", {p.multiplier.num, p.multiplier.den}},
                {"owner_fee", {p.owner_fee.num, p.owner_fee.den}},
                {"min_toll_wei", to_string(p.min_toll)},
                {"payout_rate", {p.payout_rate.num, p.payout_rate.den}},
                {"bugs", bugs}};
}

int cmd_attack(const ScenarioArgs& args) {
    auto out_dir = ensure_out_dir(args.out_dir);
    std::uint64_t seed = args.seed.value_or(0);

    auto attack_scenario = scenario::load_attack(args.scenario_file);
    json report_json;
    if (auto* dos = std::get_if<attacks::DosScenario>(&attack_scenario)) {
        auto report = attacks::run_dos_attack(*dos);
        save_transactions(out_dir / "trace.csv", report.trace);
        check_trace(report.trace, dos->scheme);
        report_json =
            json{{"scenario", "dos"},
                 {"parameters", params_json(dos->params)},
                 {"asserted",
                  json{{"frozen", report.frozen},
                       {"outgoing_after_join_wei", to_string(report.outgoing_after_join)},
                       {"honest_payout_count", report.honest_payout_count},
                       {"attacker_received_wei", to_string(report.attacker_received)},
                       {"stranded_attacker_share_wei", to_string(report.stranded_attacker_share)},
                       {"balance_at_join_wei", to_string(report.balance_at_join)},
                       {"final_balance_wei", to_string(report.final_balance)},
                       {"ticks", report.ticks}}},
                 {"trace", "trace.csv"}};
        std::cout << "dos attack: frozen=" << (report.frozen ? "true" : "false") << "\n";
    } else {
        auto& shutdown = std::get<attacks::ShutdownScenario>(attack_scenario);
        auto report = attacks::run_shutdown_attack(shutdown);
        save_transactions(out_dir / "trace.csv", report.trace);
        check_trace(report.trace, shutdown.scheme);
        report_json =
            json{{"scenario", "shutdown"},
                 {"parameters", params_json(shutdown.params)},
                 {"asserted",
                  json{{"oscar_sent_wei", to_string(report.oscar_sent)},
                       {"oscar_received_wei", to_string(report.oscar_received)},
                       {"oscar_net_wei", to_string_signed(report.oscar_net)},
                       {"backlog_wei", to_string(report.backlog_wei)},
                       {"owner_fees_total_wei", to_string(report.owner_fees_total)},
                       {"users_paid_after_oscar", report.users_paid_after_oscar}}},
                 {"trace", "trace.csv"}};
        std::cout << "shutdown attack: oscar net " << to_string_signed(report.oscar_net)
                  << " wei, backlog " << to_string(report.backlog_wei) << " wei\n";
    }
    write_json(out_dir / "report.json", report_json);
    write_run_meta(out_dir, "attack", seed,
                   json{{"scenario", args.scenario_file}, {"out", args.out_dir}});
    return 0;
}

struct AnalyzeArgs {
    std::string txs_file;
    std::string rates_file;
    std::string scheme;
    std::string out_dir;
    std::string manifest_file;
};

int cmd_analyze(const AnalyzeArgs& args) {
    auto out_dir = ensure_out_dir(args.out_dir);
    Address scheme = parse_addr_flag(args.scheme);

    auto txs = load_transactions(args.txs_file);
    auto rates = load_rates(args.rates_file);

    // Every value-moving row needs a rate; list all gaps before failing.
    std::set<EpochDay> missing;
    for (const auto& tx : txs)
        if (classify_flow(tx, scheme) != FlowKind::kUnrelated &&
            !rates.contains(day_of(tx.timestamp)))
            missing.insert(day_of(tx.timestamp));
    if (!missing.empty()) {
        for (EpochDay d : missing) std::cerr << "missing rate for " << format_date(d) << "\n";
        throw Error("rates file " + args.rates_file + " lacks " +
                    std::to_string(missing.size()) + " date(s)");
    }

    if (auto breach = verify_conservation(txs, scheme))
        throw InvariantBreach("conservation: " + *breach);

    SchemeKind kind = SchemeKind::kPublic;
    bool kind_known = false;
    if (!args.manifest_file.empty()) {
        for (const auto& d : load_scheme_manifest(args.manifest_file))
            if (d.address == scheme) {
                kind = d.kind;
                kind_known = true;
            }
    }

    auto summary = metrics::flow_summary(txs, scheme, rates);
    auto nets = metrics::user_nets(txs, scheme, rates);
    auto volume = metrics::daily_volume(txs, scheme, rates);

    // cross-foot: daily volume must reproduce the flow totals exactly
    Rat vol_in, vol_out;
    for (const auto& row : volume) {
        vol_in += row.in_usd;
        vol_out += row.out_usd;
    }
    if (vol_in != summary.in_usd || vol_out != summary.out_usd)
        throw InvariantBreach("daily volume totals do not cross-foot with the flow summary");
    std::cout << "crossfoot: ok\n";

    metrics::write_volume_csv(out_dir / "volume.csv", volume);
    metrics::write_gains_losses_csv(out_dir / "gains_losses.csv", metrics::gains_ascending(nets),
                                    metrics::losses_ascending(nets));

    std::vector<Rat> invested, received;
    for (const auto& n : nets) {
        if (n.sent_usd > 0) invested.push_back(n.sent_usd);
        if (n.received_usd > 0) received.push_back(n.received_usd);
    }
    std::vector<metrics::GiniRow> gini_rows;
    metrics::GiniRow row;
    row.scheme = scheme;
    row.total_in_usd = summary.in_usd;
    row.total_out_usd = summary.out_usd;
    bool have_gini = false;
    if (!invested.empty()) {
        auto curve = metrics::lorenz(invested);
        metrics::write_lorenz_csv(out_dir / "lorenz_in.csv", curve);
        row.gini_in_pct = curve.gini_pct;
        have_gini = true;
    } else {
        metrics::write_lorenz_csv(out_dir / "lorenz_in.csv", metrics::InequalityCurve{});
    }
    if (!received.empty()) {
        auto curve = metrics::lorenz(received);
        metrics::write_lorenz_csv(out_dir / "lorenz_out.csv", curve);
        row.gini_out_pct = curve.gini_pct;
        have_gini = true;
    } else {
        metrics::write_lorenz_csv(out_dir / "lorenz_out.csv", metrics::InequalityCurve{});
    }
    if (have_gini) gini_rows.push_back(row);
    metrics::write_gini_csv(out_dir / "gini.csv", gini_rows);

    std::vector<std::pair<SchemeKind, int>> lifetimes;
    std::vector<metrics::CreationCount> creations;
    if (!txs.empty()) {
        lifetimes.emplace_back(kind, metrics::lifetime_days(txs));
        UnixSeconds first = txs.front().timestamp;
        for (const auto& tx : txs) first = std::min(first, tx.timestamp);
        SchemeDescriptor descriptor{scheme, "", kind, SchemeArchetype::kUnknown};
        creations = metrics::creation_timeline({{descriptor, day_of(first)}});
    }
    metrics::write_lifetime_csv(out_dir / "lifetime.csv", lifetimes);
    metrics::write_creation_csv(out_dir / "creation.csv", creations);

    write_json(out_dir / "flow_summary.json",
               json{{"scheme", scheme.str()},
                    {"kind", kind_known ? std::string(to_string(kind)) : "unknown"},
                    {"in_tx_count", summary.in_tx_count},
                    {"out_tx_count", summary.out_tx_count},
                    {"in_wei", to_string(summary.in_wei)},
                    {"out_wei", to_string(summary.out_wei)},
                    {"in_usd", format_decimal(summary.in_usd, 6)},
                    {"out_usd", format_decimal(summary.out_usd, 6)},
                    {"paying_users", summary.paying_users},
                    {"paid_users", summary.paid_users}});

    write_run_meta(out_dir, "analyze", 0,
                   json{{"txs", args.txs_file},
                        {"rates", args.rates_file},
                        {"scheme", args.scheme},
                        {"manifest", args.manifest_file},
                        {"out", args.out_dir}});
    std::cout << "in: " << format_decimal(summary.in_usd, 6) << " USD from "
              << summary.paying_users << " users; out: " << format_decimal(summary.out_usd, 6)
              << " USD to " << summary.paid_users << " users\n";
    return 0;
}

struct ReportArgs {
    std::string manifest_file;
    std::string txs_dir;
    std::string rates_file;
    std::string out_dir;
};

int cmd_report(const ReportArgs& args) {
    auto out_dir = ensure_out_dir(args.out_dir);
    auto manifest = load_scheme_manifest(args.manifest_file);
    auto rates = load_rates(args.rates_file);

    std::vector<std::pair<SchemeKind, int>> lifetimes;
    std::vector<std::pair<SchemeDescriptor, EpochDay>> first_dates;
    std::vector<metrics::GiniRow> gini_rows;

    struct KindTotals {
        std::size_t schemes = 0;
        std::size_t in_tx = 0, out_tx = 0;
        Wei in_wei = 0, out_wei = 0;
        Rat in_usd, out_usd;
        std::set<Address> paying, paid;
    };
    std::map<SchemeKind, KindTotals> totals;

    for (const auto& descriptor : manifest) {
        fs::path tx_path = fs::path(args.txs_dir) / (descriptor.address.str() + ".csv");
        if (!fs::exists(tx_path)) throw Error("missing transactions file " + tx_path.string());
        auto txs = load_transactions(tx_path);

        auto& agg = totals[descriptor.kind];
        ++agg.schemes;

        if (txs.empty()) {
            lifetimes.emplace_back(descriptor.kind, 0); // deployed, never used
            continue;
        }
        lifetimes.emplace_back(descriptor.kind, metrics::lifetime_days(txs));
        UnixSeconds first = txs.front().timestamp;
        for (const auto& tx : txs) first = std::min(first, tx.timestamp);
        first_dates.emplace_back(descriptor, day_of(first));

        auto summary = metrics::flow_summary(txs, descriptor.address, rates);
        agg.in_tx += summary.in_tx_count;
        agg.out_tx += summary.out_tx_count;
        agg.in_wei += summary.in_wei;
        agg.out_wei += summary.out_wei;
        agg.in_usd += summary.in_usd;
        agg.out_usd += summary.out_usd;
        for (const auto& tx : txs) {
            if (classify_flow(tx, descriptor.address) == FlowKind::kIncoming && tx.value > 0)
                agg.paying.insert(tx.from);
            if (classify_flow(tx, descriptor.address) == FlowKind::kOutgoing && tx.value > 0)
                agg.paid.insert(tx.to);
        }

        auto nets = metrics::user_nets(txs, descriptor.address, rates);
        std::vector<Rat> invested, received;
        for (const auto& n : nets) {
            if (n.sent_usd > 0) invested.push_back(n.sent_usd);
            if (n.received_usd > 0) received.push_back(n.received_usd);
        }
        if (!invested.empty() || !received.empty()) {
            metrics::GiniRow row;
            row.scheme = descriptor.address;
            row.total_in_usd = summary.in_usd;
            row.total_out_usd = summary.out_usd;
            if (!invested.empty()) row.gini_in_pct = metrics::lorenz(invested).gini_pct;
            if (!received.empty()) row.gini_out_pct = metrics::lorenz(received).gini_pct;
            gini_rows.push_back(row);
        }
    }

    metrics::write_lifetime_csv(out_dir / "lifetime.csv", lifetimes);
    metrics::write_creation_csv(out_dir / "creation.csv",
                                metrics::creation_timeline(first_dates));
    metrics::write_gini_csv(out_dir / "gini.csv", gini_rows);

    json kinds = json::object();
    for (const auto& [kind, agg] : totals) {
        kinds[std::string(to_string(kind))] =
            json{{"schemes", agg.schemes},
                 {"in_tx", agg.in_tx},
                 {"out_tx", agg.out_tx},
                 {"in_wei", to_string(agg.in_wei)},
                 {"out_wei", to_string(agg.out_wei)},
                 {"in_usd", format_decimal(agg.in_usd, 6)},
                 {"out_usd", format_decimal(agg.out_usd, 6)},
                 {"paying_users", agg.paying.size()},
                 {"paid_users", agg.paid.size()}};
    }
    write_json(out_dir / "summary.json", json{{"schemes", manifest.size()}, {"kinds", kinds}});

    write_run_meta(out_dir, "report", 0,
                   json{{"manifest", args.manifest_file},
                        {"txs_dir", args.txs_dir},
                        {"rates", args.rates_file},
                        {"out", args.out_dir}});
    std::cout << "schemes: " << manifest.size() << ", gini rows: " << gini_rows.size() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ponzilab: smart-contract Ponzi scheme forensics toolkit"};
    app.require_subcommand(1);

    ClassifyArgs classify_args;
    auto* classify = app.add_subcommand(
        "classify", "Flag corpus contracts whose bytecode is near a known scheme");
    classify->add_option("--corpus", classify_args.corpus_dir, "Directory of <address>.hex files")
        ->required();
    classify->add_option("--seeds", classify_args.seeds_file, "Scheme manifest JSONL")->required();
    classify->add_option("--threshold", classify_args.threshold, "NLD threshold in (0,1)")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));
    classify->add_option("--fp-limit", classify_args.fp_limit,
                         "Neighbor count above which a hit is a suspected false positive");
    classify->add_option("--seed", classify_args.seed, "RNG seed (recorded in run-meta.json)");
    classify->add_option("--workers", classify_args.workers, "Worker threads");
    classify->add_option("--out", classify_args.out_dir, "Output directory")->required();

    BaselineArgs baseline_args;
    auto* baseline =
        app.add_subcommand("baseline", "Estimate the mean NLD between two arbitrary contracts");
    baseline->add_option("--corpus", baseline_args.corpus_dir, "Directory of <address>.hex files")
        ->required();
    baseline->add_option("--samples", baseline_args.samples, "Monte Carlo pair count");
    baseline->add_option("--seed", baseline_args.seed, "RNG seed");
    baseline->add_option("--workers", baseline_args.workers, "Worker threads");
    baseline->add_option("--out", baseline_args.out_dir, "Output directory")->required();

    ScenarioArgs simulate_args;
    auto* simulate = app.add_subcommand("simulate", "Run a scheme scenario and emit its trace");
    simulate->add_option("--scenario", simulate_args.scenario_file, "Scenario JSON")->required();
    simulate->add_option("--seed", simulate_args.seed, "Recorded in run-meta.json");
    simulate->add_option("--out", simulate_args.out_dir, "Output directory")->required();

    ScenarioArgs attack_args;
    auto* attack = app.add_subcommand("attack", "Run a documented attack scenario");
    attack->add_option("--scenario", attack_args.scenario_file, "Attack scenario JSON")
        ->required();
    attack->add_option("--seed", attack_args.seed, "Recorded in run-meta.json");
    attack->add_option("--out", attack_args.out_dir, "Output directory")->required();

    AnalyzeArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "Economic impact metrics for one scheme");
    analyze->add_option("--txs", analyze_args.txs_file, "Transactions CSV")->required();
    analyze->add_option("--rates", analyze_args.rates_file, "date,usd_per_eth CSV")->required();
    analyze->add_option("--scheme", analyze_args.scheme, "Scheme address")->required();
    analyze->add_option("--manifest", analyze_args.manifest_file,
                        "Optional manifest JSONL for the scheme kind");
    analyze->add_option("--out", analyze_args.out_dir, "Output directory")->required();

    ReportArgs report_args;
    auto* report = app.add_subcommand(
        "report", "Collection-level lifetime/creation/Gini report over a manifest");
    report->add_option("--manifest", report_args.manifest_file, "Scheme manifest JSONL")
        ->required();
    report->add_option("--txs-dir", report_args.txs_dir, "Directory of <address>.csv traces")
        ->required();
    report->add_option("--rates", report_args.rates_file, "date,usd_per_eth CSV")->required();
    report->add_option("--out", report_args.out_dir, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify->parsed()) return cmd_classify(classify_args);
        if (baseline->parsed()) return cmd_baseline(baseline_args);
        if (simulate->parsed()) return cmd_simulate(simulate_args);
        if (attack->parsed()) return cmd_attack(attack_args);
        if (analyze->parsed()) return cmd_analyze(analyze_args);
        if (report->parsed()) return cmd_report(report_args);
    } catch (const InvariantBreach& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
