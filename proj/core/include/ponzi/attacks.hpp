#pragma once

#include <cstdint>
#include <vector>

#include "ponzi/ledger.hpp"
#include "ponzi/schemes.hpp"
#include "ponzi/types.hpp"

namespace ponzi::attacks {

struct AttackerProfile {
    Address address;
    bool throws_on_receive = true;
    Wei budget = 0;
};

struct NamedDeposit {
    Address from;
    Wei amount = 0;
};

// Daily-payout scheme poisoned by a contract whose fallback always throws.
// With checked sends every tick reverts wholesale and the balance freezes;
// with unchecked sends only the attacker's share strands.
struct DosScenario {
    Address scheme;
    Address owner;
    sim::SchemeParams params;          // hyip_daily
    std::vector<NamedDeposit> honest_deposits;
    AttackerProfile attacker;
    std::size_t ticks = 10;
    UnixSeconds start = 0;
    std::int64_t step_seconds = 86400;
};

struct DosReport {
    bool frozen = false;              // no payouts and balance unchanged after joining
    Wei balance_at_join = 0;
    Wei final_balance = 0;
    Wei outgoing_after_join = 0;      // non-reverted wei leaving the scheme after the attacker joined
    Wei attacker_received = 0;
    Wei stranded_attacker_share = 0;  // reverted transfers addressed to the attacker
    std::size_t honest_payout_count = 0;
    std::size_t ticks = 0;
    std::vector<Transaction> trace;
};

DosReport run_dos_attack(const DosScenario& scenario);

// Oscar's array-scheme shutdown: two consecutive large deposits. The second
// one buys back the first; everything invested afterwards services the
// second, stalling every later user.
struct ShutdownScenario {
    Address scheme;
    Address owner;
    sim::SchemeParams params;          // array
    std::vector<NamedDeposit> prior_deposits;
    Address oscar;
    Wei oscar_amount = 0;
    std::vector<NamedDeposit> subsequent_deposits;
    UnixSeconds start = 0;
    std::int64_t step_seconds = 60;
};

struct ShutdownReport {
    Wei oscar_sent = 0;
    Wei oscar_received = 0;
    i128 oscar_net = 0;              // received - sent
    Wei backlog_wei = 0;             // shortfall before any post-Oscar user can be paid
    Wei owner_fees_total = 0;
    std::size_t users_paid_after_oscar = 0; // distinct post-Oscar joiners paid by the end
    std::vector<Transaction> trace;
};

ShutdownReport run_shutdown_attack(const ShutdownScenario& scenario);

// Joiners needed after user k before k is paid, for the no-fee doubler with
// fixed tolls whose first deposit goes to the owner: always k + 1.
std::uint64_t payout_wait(std::uint64_t k);

} // namespace ponzi::attacks
