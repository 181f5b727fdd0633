#include "ponzi/attacks.hpp"

#include <set>

namespace ponzi::attacks {

namespace {

void append_trace(std::vector<Transaction>& trace, std::uint64_t block, UnixSeconds at,
                  const Address& scheme, const sim::SimEvent& ev,
                  const std::vector<sim::Transfer>& transfers) {
    if (ev.kind == sim::SimEvent::Kind::kDeposit)
        trace.push_back(Transaction{block, at, ev.from, scheme, ev.amount, false, false});
    for (const auto& t : transfers)
        trace.push_back(Transaction{block, at, t.from, t.to, t.amount, t.reverted, true});
}

} // namespace

DosReport run_dos_attack(const DosScenario& scenario) {
    if (scenario.params.archetype != sim::Archetype::kHyipDaily)
        throw Error("dos attack targets daily-payout schemes");

    const Address& attacker = scenario.attacker.address;
    sim::FailureOracle fails = [&](const Address& to) {
        return scenario.attacker.throws_on_receive && to == attacker;
    };

    // The attacker enters with the smallest deposit the contract accepts.
    Wei attacker_stake = scenario.params.min_toll > 0 ? scenario.params.min_toll : Wei(1);

    DosReport report;
    report.ticks = scenario.ticks;

    sim::SimState st = sim::make_state(scenario.scheme, scenario.owner, scenario.params);
    std::uint64_t block = 0;
    UnixSeconds at = scenario.start;

    auto apply = [&](const sim::SimEvent& ev) {
        ++block;
        auto transfers = sim::step(st, scenario.params, ev, fails);
        append_trace(report.trace, block, ev.at, scenario.scheme, ev, transfers);
        return transfers;
    };

    for (const auto& dep : scenario.honest_deposits) {
        apply(sim::SimEvent::deposit(at, dep.from, dep.amount));
        at += scenario.step_seconds;
    }
    apply(sim::SimEvent::deposit(at, attacker, attacker_stake));
    report.balance_at_join = st.balance;

    for (std::size_t tick = 0; tick < scenario.ticks; ++tick) {
        at += scenario.step_seconds;
        auto transfers = apply(sim::SimEvent::daily_tick(at));
        for (const auto& t : transfers) {
            if (t.reverted) {
                if (t.to == attacker) report.stranded_attacker_share += t.amount;
                continue;
            }
            report.outgoing_after_join += t.amount;
            if (t.to == attacker)
                report.attacker_received += t.amount;
            else
                ++report.honest_payout_count;
        }
    }

    report.final_balance = st.balance;
    report.frozen =
        report.outgoing_after_join == 0 && report.final_balance == report.balance_at_join;
    return report;
}

ShutdownReport run_shutdown_attack(const ShutdownScenario& scenario) {
    if (scenario.params.archetype != sim::Archetype::kArray)
        throw Error("shutdown attack targets array schemes");

    ShutdownReport report;
    sim::SimState st = sim::make_state(scenario.scheme, scenario.owner, scenario.params);
    std::uint64_t block = 0;
    UnixSeconds at = scenario.start;

    auto apply = [&](const sim::SimEvent& ev) {
        ++block;
        auto transfers = sim::step(st, scenario.params, ev, sim::never_fails);
        append_trace(report.trace, block, ev.at, scenario.scheme, ev, transfers);
    };

    for (const auto& dep : scenario.prior_deposits) {
        apply(sim::SimEvent::deposit(at, dep.from, dep.amount));
        at += scenario.step_seconds;
    }

    // Two back-to-back deposits; atomicity is Oscar's via a helper contract.
    apply(sim::SimEvent::deposit(at, scenario.oscar, scenario.oscar_amount));
    at += scenario.step_seconds;
    apply(sim::SimEvent::deposit(at, scenario.oscar, scenario.oscar_amount));
    at += scenario.step_seconds;

    // Everything still queued joined before or with Oscar, so this is what
    // later users must cover before any of them sees a payout.
    Wei owed_ahead = 0;
    for (std::size_t i = st.cursor; i < st.users.size(); ++i) owed_ahead += st.users[i].owed;
    Wei available = st.balance - st.unclaimed_fees;
    report.backlog_wei = owed_ahead > available ? owed_ahead - available : 0;

    std::set<Address> post_oscar_joiners;
    std::set<Address> post_oscar_paid;
    for (const auto& dep : scenario.subsequent_deposits) {
        post_oscar_joiners.insert(dep.from);
        apply(sim::SimEvent::deposit(at, dep.from, dep.amount));
        at += scenario.step_seconds;
    }

    for (const auto& tx : report.trace) {
        if (tx.is_error) continue;
        if (!tx.is_internal && tx.from == scenario.oscar) report.oscar_sent += tx.value;
        if (tx.is_internal && tx.to == scenario.oscar) report.oscar_received += tx.value;
        if (tx.is_internal && post_oscar_joiners.contains(tx.to)) post_oscar_paid.insert(tx.to);
    }
    report.oscar_net = i128(report.oscar_received) - i128(report.oscar_sent);
    report.users_paid_after_oscar = post_oscar_paid.size();
    report.owner_fees_total = st.owner_fees_total;
    return report;
}

std::uint64_t payout_wait(std::uint64_t k) {
    if (k == 0) throw Error("payout_wait needs k >= 1");
    return k + 1;
}

} // namespace ponzi::attacks
