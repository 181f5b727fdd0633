#include "ponzi/schemes.hpp"

#include <algorithm>

namespace ponzi::sim {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(what); }

// Wei the contract may spend on payouts; accrued fees are reserved until
// the owner collects them.
Wei payable(const SimState& st) { return st.balance - st.unclaimed_fees; }

// Attempts an internal transfer. A failing recipient produces a reverted
// trace entry and leaves the value in the contract.
bool try_send(SimState& st, std::vector<Transfer>& out, const Address& to, Wei amount,
              const FailureOracle& fails) {
    if (amount == 0) return true;
    if (fails(to)) {
        out.push_back(Transfer{st.scheme, to, amount, true});
        return false;
    }
    st.balance -= amount;
    out.push_back(Transfer{st.scheme, to, amount, false});
    return true;
}

Wei fee_for_deposit(SimState& st, const SchemeParams& p, Wei amount) {
    if (p.has_bug(kAccumulatingFees)) return accumulated_fee_charge(st, p, amount);
    return p.owner_fee.apply(amount);
}

void deliver_fee(SimState& st, std::vector<Transfer>& out, const SchemeParams& p, Wei fee,
                 const FailureOracle& fails) {
    if (fee == 0) return;
    if (p.has_bug(kOpenConstructor)) {
        // Rubixi-style contracts hold fees until collectAllFees; that is
        // what makes the ownership hijack profitable.
        st.unclaimed_fees += fee;
        return;
    }
    if (try_send(st, out, st.owner, fee, fails)) st.owner_fees_total += fee;
}

void reject_deposit(SimState& st, std::vector<Transfer>& out, const SchemeParams& p,
                    const Address& from, Wei amount, const FailureOracle& fails) {
    if (p.reject_policy == RejectPolicy::kRefund) try_send(st, out, from, amount, fails);
    // kKeep: the toll stays in the contract
}

void array_payout_loop(SimState& st, std::vector<Transfer>& out, const FailureOracle& fails) {
    while (st.cursor < st.users.size() && payable(st) >= st.users[st.cursor].owed) {
        // A failed send still advances the cursor: the contract believes it
        // has paid, the value stays inside.
        try_send(st, out, st.users[st.cursor].addr, st.users[st.cursor].owed, fails);
        ++st.cursor;
    }
}

void deposit_array(SimState& st, const SchemeParams& p, const SimEvent& ev,
                   std::vector<Transfer>& out, const FailureOracle& fails) {
    st.balance += ev.amount;
    if (ev.amount < p.min_toll) {
        reject_deposit(st, out, p, ev.from, ev.amount, fails);
        return;
    }
    st.users.push_back(QueueEntry{ev.from, p.multiplier.apply(ev.amount)});
    if (p.first_deposit_to_owner && !st.any_deposit_accepted) {
        st.any_deposit_accepted = true;
        if (try_send(st, out, st.owner, ev.amount, fails)) st.owner_fees_total += ev.amount;
    } else {
        st.any_deposit_accepted = true;
        deliver_fee(st, out, p, fee_for_deposit(st, p, ev.amount), fails);
    }
    array_payout_loop(st, out, fails);
}

void deposit_tree(SimState& st, const SchemeParams& p, const SimEvent& ev,
                  std::vector<Transfer>& out, const FailureOracle& fails) {
    st.balance += ev.amount;
    bool ok = ev.amount >= p.min_toll && !st.parent.contains(ev.from) && ev.inviter &&
              st.parent.contains(*ev.inviter);
    if (!ok) {
        reject_deposit(st, out, p, ev.from, ev.amount, fails);
        return;
    }
    st.any_deposit_accepted = true;
    st.parent.emplace(ev.from, *ev.inviter);
    // Split up the ancestor chain, halving at each level; whatever is left
    // after the last ancestor goes to the root owner.
    Wei remaining = ev.amount;
    Address cur = *ev.inviter;
    while (cur != st.owner) {
        Wei share = remaining / 2;
        try_send(st, out, cur, share, fails);
        remaining -= share;
        cur = st.parent.at(cur);
    }
    try_send(st, out, st.owner, remaining, fails);
}

void deposit_handover(SimState& st, const SchemeParams& p, const SimEvent& ev,
                      std::vector<Transfer>& out, const FailureOracle& fails) {
    st.balance += ev.amount;
    if (ev.amount < st.price) {
        reject_deposit(st, out, p, ev.from, ev.amount, fails);
        return;
    }
    st.any_deposit_accepted = true;
    Wei fee = p.owner_fee.apply(st.price); // commission stays in the contract
    st.unclaimed_fees += fee;
    try_send(st, out, st.last_user, st.price - fee, fails);
    st.last_user = ev.from;
    st.price = p.price_growth.apply(st.price);
}

void deposit_waterfall(SimState& st, const SchemeParams& p, const SimEvent& ev,
                       std::vector<Transfer>& out, const FailureOracle& fails) {
    st.balance += ev.amount;
    if (ev.amount < p.min_toll) {
        reject_deposit(st, out, p, ev.from, ev.amount, fails);
        return;
    }
    st.any_deposit_accepted = true;
    Wei fee = fee_for_deposit(st, p, ev.amount);
    st.users.push_back(QueueEntry{ev.from, ev.amount});
    deliver_fee(st, out, p, fee, fails);
    // Each new investment is what gets divided among earlier users;
    // leftovers accumulate in the contract and are never paid out.
    Wei pot = ev.amount > fee ? ev.amount - fee : 0;
    if (!p.has_bug(kCursorNotReset)) st.cursor = 0;
    while (st.cursor < st.users.size()) {
        Wei pay = p.payout_rate.apply(st.users[st.cursor].owed);
        if (pay > pot) break;
        try_send(st, out, st.users[st.cursor].addr, pay, fails);
        pot -= pay;
        ++st.cursor;
    }
}

void deposit_hyip(SimState& st, const SchemeParams& p, const SimEvent& ev,
                  std::vector<Transfer>& out, const FailureOracle& fails) {
    st.balance += ev.amount;
    if (ev.amount < p.min_toll) {
        reject_deposit(st, out, p, ev.from, ev.amount, fails);
        return;
    }
    st.any_deposit_accepted = true;
    Wei fee = fee_for_deposit(st, p, ev.amount);
    st.users.push_back(QueueEntry{ev.from, ev.amount});
    deliver_fee(st, out, p, fee, fails);
}

void hyip_tick(SimState& st, const SchemeParams& p, std::vector<Transfer>& out,
               const FailureOracle& fails) {
    struct Payment {
        Address to;
        Wei amount;
    };
    std::vector<Payment> payments;
    payments.reserve(st.users.size());
    for (const auto& u : st.users) {
        Wei pay = p.payout_rate.apply(u.owed);
        if (pay > 0) payments.push_back(Payment{u.addr, pay});
    }

    if (!p.has_bug(kUncheckedSend)) {
        // Checked sends: the first failure throws and reverts the whole
        // tick. The attempted transfers up to and including it appear in
        // the trace as reverted; state is untouched.
        Wei available = payable(st);
        std::size_t stop = payments.size();
        for (std::size_t i = 0; i < payments.size(); ++i) {
            if (payments[i].amount > available || fails(payments[i].to)) {
                stop = i;
                break;
            }
            available -= payments[i].amount;
        }
        if (stop < payments.size()) {
            for (std::size_t i = 0; i <= stop; ++i)
                out.push_back(Transfer{st.scheme, payments[i].to, payments[i].amount, true});
            return;
        }
        for (const auto& pay : payments) try_send(st, out, pay.to, pay.amount, fails);
        return;
    }

    // Unchecked sends: failures go unnoticed, the rest of the loop runs,
    // unredeemed value stays inside the contract.
    for (const auto& pay : payments) {
        if (pay.amount > payable(st)) {
            out.push_back(Transfer{st.scheme, pay.to, pay.amount, true});
            continue;
        }
        try_send(st, out, pay.to, pay.amount, fails);
    }
}

} // namespace

void SchemeParams::validate() const {
    if (multiplier.den == 0 || owner_fee.den == 0 || payout_rate.den == 0 || price_growth.den == 0)
        fail("fraction denominator must be positive");
    if (owner_fee.num > owner_fee.den) fail("owner fee must not exceed 1");
    if (multiplier.num < multiplier.den) fail("multiplier must be at least 1");
    if (archetype == Archetype::kHandover && price_growth.num <= price_growth.den)
        fail("handover price growth must exceed 1");
    // Keeps amount * num exact in 128 bits for any plausible wei value.
    constexpr std::uint64_t kMaxFractionPart = 1'000'000'000;
    for (const Fraction* f : {&multiplier, &owner_fee, &payout_rate, &price_growth})
        if (f->num > kMaxFractionPart || f->den > kMaxFractionPart)
            fail("fraction components must not exceed 10^9");
}

SimEvent SimEvent::deposit(UnixSeconds at, Address from, Wei amount,
                           std::optional<Address> inviter) {
    SimEvent ev;
    ev.kind = Kind::kDeposit;
    ev.at = at;
    ev.from = from;
    ev.amount = amount;
    ev.inviter = inviter;
    return ev;
}

SimEvent SimEvent::owner_withdraw(UnixSeconds at) {
    SimEvent ev;
    ev.kind = Kind::kOwnerWithdraw;
    ev.at = at;
    return ev;
}

SimEvent SimEvent::daily_tick(UnixSeconds at) {
    SimEvent ev;
    ev.kind = Kind::kDailyTick;
    ev.at = at;
    return ev;
}

SimEvent SimEvent::constructor_call(UnixSeconds at, Address caller) {
    SimEvent ev;
    ev.kind = Kind::kConstructorCall;
    ev.at = at;
    ev.from = caller;
    return ev;
}

SimEvent SimEvent::clear_array(UnixSeconds at, std::uint64_t gas_limit) {
    SimEvent ev;
    ev.kind = Kind::kClearArray;
    ev.at = at;
    ev.gas_limit = gas_limit;
    return ev;
}

SimState make_state(const Address& scheme, const Address& owner, const SchemeParams& params) {
    params.validate();
    SimState st;
    st.scheme = scheme;
    st.owner = owner;
    if (params.archetype == Archetype::kTree) st.parent.emplace(owner, owner); // root
    if (params.archetype == Archetype::kHandover) {
        st.last_user = owner;
        st.price = params.initial_price;
    }
    return st;
}

Wei accumulated_fee_charge(SimState& state, const SchemeParams& params, Wei amount) {
    if (!params.has_bug(kAccumulatingFees)) fail("accumulating-fees variant not enabled");
    state.pending_fees += params.owner_fee.apply(amount);
    // The contract cannot part with more than it holds (the deposit just
    // joined the balance); the recurrence variable itself never shrinks.
    return std::min(state.pending_fees, payable(state));
}

void hijack_constructor(SimState& state, const SchemeParams& params, const Address& caller) {
    if (!params.has_bug(kOpenConstructor))
        fail("constructor is not callable on this scheme");
    state.owner = caller;
}

bool clear_queue(SimState& state, const SchemeParams& params, std::uint64_t gas_limit) {
    if (!params.has_bug(kGasLimitedClear))
        fail("gas-limited clear not modeled for this scheme");
    u128 cost = u128(params.clear_gas_per_item) * state.users.size();
    if (cost > gas_limit) return false; // out of gas, array untouched
    state.users.clear();
    state.cursor = 0;
    return true;
}

std::vector<Transfer> step(SimState& state, const SchemeParams& params, const SimEvent& ev,
                           const FailureOracle& fails) {
    if (ev.at < state.clock) fail("event out of time order");
    state.clock = ev.at;

    std::vector<Transfer> out;
    switch (ev.kind) {
        case SimEvent::Kind::kDeposit:
            switch (params.archetype) {
                case Archetype::kArray: deposit_array(state, params, ev, out, fails); break;
                case Archetype::kTree: deposit_tree(state, params, ev, out, fails); break;
                case Archetype::kHandover: deposit_handover(state, params, ev, out, fails); break;
                case Archetype::kWaterfall: deposit_waterfall(state, params, ev, out, fails); break;
                case Archetype::kHyipDaily: deposit_hyip(state, params, ev, out, fails); break;
            }
            break;
        case SimEvent::Kind::kOwnerWithdraw: {
            Wei amt = std::min(state.unclaimed_fees, state.balance);
            if (amt > 0 && try_send(state, out, state.owner, amt, fails)) {
                state.unclaimed_fees -= amt;
                state.owner_fees_total += amt;
            }
            break;
        }
        case SimEvent::Kind::kDailyTick:
            if (params.archetype != Archetype::kHyipDaily)
                fail("daily_tick only applies to daily-payout schemes");
            hyip_tick(state, params, out, fails);
            break;
        case SimEvent::Kind::kConstructorCall:
            hijack_constructor(state, params, ev.from);
            break;
        case SimEvent::Kind::kClearArray:
            clear_queue(state, params, ev.gas_limit);
            break;
    }
    return out;
}

RunResult run_with_state(const Address& scheme, const Address& owner, const SchemeParams& params,
                         const std::vector<SimEvent>& events, const FailureOracle& fails) {
    RunResult result;
    result.state = make_state(scheme, owner, params);
    std::uint64_t block = 0;
    for (const auto& ev : events) {
        ++block;
        if (ev.kind == SimEvent::Kind::kDeposit)
            result.trace.push_back(Transaction{block, ev.at, ev.from, scheme, ev.amount,
                                               /*is_error=*/false, /*is_internal=*/false});
        auto transfers = step(result.state, params, ev, fails);
        for (const auto& t : transfers)
            result.trace.push_back(
                Transaction{block, ev.at, t.from, t.to, t.amount, t.reverted, /*is_internal=*/true});
    }
    return result;
}

std::vector<Transaction> run(const Address& scheme, const Address& owner,
                             const SchemeParams& params, const std::vector<SimEvent>& events,
                             const FailureOracle& fails) {
    return run_with_state(scheme, owner, params, events, fails).trace;
}

} // namespace ponzi::sim
