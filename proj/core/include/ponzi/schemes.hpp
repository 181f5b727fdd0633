#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "ponzi/ledger.hpp"
#include "ponzi/types.hpp"

namespace ponzi::sim {

enum class Archetype { kArray, kTree, kHandover, kWaterfall, kHyipDaily };
enum class RejectPolicy { kRefund, kKeep };

// Documented contract bugs reproduced by the simulator.
enum Bug : std::uint32_t {
    kUncheckedSend = 1u << 0,   // failed sends go unnoticed; value strands in the contract
    kAccumulatingFees = 1u << 1, // "fees += amount / N" instead of "fees = amount / N"
    kCursorNotReset = 1u << 2,   // waterfall payout cursor survives across deposits
    kOpenConstructor = 1u << 3,  // mis-named constructor; anyone can take ownership
    kGasLimitedClear = 1u << 4,  // clearing the user array costs gas linear in its length
};

// Exact fraction; all scheme arithmetic is integer wei with truncating
// division, matching EVM semantics.
struct Fraction {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    Wei apply(Wei amount) const { return amount * num / den; }
};

struct SchemeParams {
    Archetype archetype = Archetype::kArray;
    Fraction multiplier{2, 1};      // array: promised payout per deposit
    Fraction owner_fee{0, 1};       // array/waterfall/hyip: cut per accepted deposit
    Wei min_toll = 0;               // array/tree/waterfall/hyip entry minimum
    Fraction payout_rate{0, 1};     // waterfall: share of own investment; hyip: per tick
    Fraction price_growth{3, 2};    // handover: price multiplier per join
    Wei initial_price = 0;          // handover
    RejectPolicy reject_policy = RejectPolicy::kRefund;
    std::uint32_t bugs = 0;
    bool first_deposit_to_owner = false; // classic doubler: first toll goes to the owner
    std::uint64_t clear_gas_per_item = 1;

    bool has_bug(Bug b) const { return (bugs & b) != 0; }
    void validate() const;
};

struct SimEvent {
    enum class Kind { kDeposit, kOwnerWithdraw, kDailyTick, kConstructorCall, kClearArray };

    Kind kind = Kind::kDeposit;
    UnixSeconds at = 0;
    Address from;                   // deposit sender / constructor caller
    Wei amount = 0;                 // deposit value
    std::optional<Address> inviter; // tree deposits
    std::uint64_t gas_limit = 0;    // clear_array

    static SimEvent deposit(UnixSeconds at, Address from, Wei amount,
                            std::optional<Address> inviter = std::nullopt);
    static SimEvent owner_withdraw(UnixSeconds at);
    static SimEvent daily_tick(UnixSeconds at);
    static SimEvent constructor_call(UnixSeconds at, Address caller);
    static SimEvent clear_array(UnixSeconds at, std::uint64_t gas_limit);
};

// An internal value transfer. Reverted transfers appear in the trace but
// move no value.
struct Transfer {
    Address from;
    Address to;
    Wei amount = 0;
    bool reverted = false;
};

// Whether a send to this address fails (a contract recipient whose
// fallback throws). Pure and stateless.
using FailureOracle = std::function<bool(const Address&)>;

inline bool never_fails(const Address&) { return false; }

struct QueueEntry {
    Address addr;
    Wei owed = 0; // array: promised payout; waterfall/hyip: original investment
};

struct SimState {
    Address scheme;
    Address owner;
    Wei balance = 0;          // wei currently held by the contract
    Wei owner_fees_total = 0; // fees delivered to the owner so far
    Wei pending_fees = 0;     // accumulating-fees recurrence value
    Wei unclaimed_fees = 0;   // accrued fees awaiting owner_withdraw
    UnixSeconds clock = 0;
    bool any_deposit_accepted = false;

    // array / waterfall / hyip
    std::vector<QueueEntry> users;
    std::size_t cursor = 0;

    // tree: child -> inviter; the owner roots the tree (mapped to itself)
    std::map<Address, Address> parent;

    // handover
    Address last_user;
    Wei price = 0;
};

SimState make_state(const Address& scheme, const Address& owner, const SchemeParams& params);

// Applies one event. Transfers are appended in the order the contract
// would have issued them; state reflects all non-reverted effects.
std::vector<Transfer> step(SimState& state, const SchemeParams& params, const SimEvent& ev,
                           const FailureOracle& fails = never_fails);

// The accumulating-fees recurrence: grows pending_fees by the configured
// fraction of the deposit and charges the whole accumulated value, capped
// by what the contract actually holds.
Wei accumulated_fee_charge(SimState& state, const SchemeParams& params, Wei amount);

// Re-points ownership; only schemes with the open-constructor bug expose
// this.
void hijack_constructor(SimState& state, const SchemeParams& params, const Address& caller);

// Clears the user array if the gas limit covers the linear scan cost.
// Returns false (state unchanged) when it does not.
bool clear_queue(SimState& state, const SchemeParams& params, std::uint64_t gas_limit);

// Runs a whole event sequence and serializes the trace in ledger form:
// deposits as external rows, every transfer as an internal row, block
// numbers assigned per event starting from 1.
std::vector<Transaction> run(const Address& scheme, const Address& owner,
                             const SchemeParams& params, const std::vector<SimEvent>& events,
                             const FailureOracle& fails = never_fails);

// run() + final state, for callers that inspect both.
struct RunResult {
    std::vector<Transaction> trace;
    SimState state;
};
RunResult run_with_state(const Address& scheme, const Address& owner, const SchemeParams& params,
                         const std::vector<SimEvent>& events,
                         const FailureOracle& fails = never_fails);

} // namespace ponzi::sim
