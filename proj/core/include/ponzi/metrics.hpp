#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "ponzi/ledger.hpp"
#include "ponzi/rational.hpp"
#include "ponzi/types.hpp"

namespace ponzi::metrics {

// Exact USD value of one transaction: value_wei / 10^18 * rate-of-day.
// Throws when the table has no entry for the transaction's date.
Rat usd_value(const Transaction& tx, const RateTable& rates);

// The public per-transaction conversion: micro-USD, rounded half-even to
// six decimal places.
BigInt to_usd_micro(const Transaction& tx, const RateTable& rates);

// Calendar days between the first and the last transaction; same-day
// activity is a lifetime of 0. Order of the list does not matter.
int lifetime_days(const std::vector<Transaction>& txs);

struct FlowSummary {
    std::size_t in_tx_count = 0;
    std::size_t out_tx_count = 0;
    Wei in_wei = 0;
    Wei out_wei = 0;
    Rat in_usd;
    Rat out_usd;
    std::size_t paying_users = 0; // distinct senders of incoming value
    std::size_t paid_users = 0;   // distinct recipients of outgoing value
};

FlowSummary flow_summary(const std::vector<Transaction>& txs, const Address& scheme,
                         const RateTable& rates);

struct UserNet {
    Address address;
    Rat sent_usd;
    Rat received_usd;
    Rat net_usd; // received - sent
};

// Per-user USD position against one scheme. The scheme itself and the null
// address are not users. Sorted by address.
std::vector<UserNet> user_nets(const std::vector<Transaction>& txs, const Address& scheme,
                               const RateTable& rates);

// Ascending gains (net > 0) and losses (|net| for net < 0), the two curves
// of the gains/losses figure.
std::vector<Rat> gains_ascending(const std::vector<UserNet>& nets);
std::vector<Rat> losses_ascending(const std::vector<UserNet>& nets);

struct DailyVolume {
    EpochDay date;
    Rat in_usd;
    Rat out_usd;
};

// One row per active calendar day, ascending; quiet days are omitted.
std::vector<DailyVolume> daily_volume(const std::vector<Transaction>& txs, const Address& scheme,
                                      const RateTable& rates);

struct LorenzPoint {
    Rat population_pct; // [0, 100]
    Rat value_pct;      // [0, 100]
};

struct InequalityCurve {
    std::vector<LorenzPoint> points; // (0,0) ... (100,100), one step per value
    Rat gini_pct;                    // 0 = perfect equality, 100 = perfect inequality
};

// Lorenz curve and Gini coefficient of a non-negative distribution with at
// least one positive entry. Gini is the mean absolute pairwise difference
// normalized by twice the mean.
InequalityCurve lorenz(std::vector<Rat> values);

struct CreationCount {
    std::string year_month; // "YYYY-MM"
    SchemeKind kind;
    std::size_t count = 0;
};

// Monthly creation counts per scheme kind, keyed by the first transaction
// date. Sorted by (month, kind).
std::vector<CreationCount> creation_timeline(
    const std::vector<std::pair<SchemeDescriptor, EpochDay>>& first_dates);

// Plot-ready CSV emitters matching the figure data layouts.
void write_volume_csv(const std::filesystem::path& path, const std::vector<DailyVolume>& rows);
void write_lorenz_csv(const std::filesystem::path& path, const InequalityCurve& curve);
void write_gains_losses_csv(const std::filesystem::path& path, const std::vector<Rat>& gains,
                            const std::vector<Rat>& losses);
void write_lifetime_csv(const std::filesystem::path& path,
                        const std::vector<std::pair<SchemeKind, int>>& lifetimes);
void write_creation_csv(const std::filesystem::path& path,
                        const std::vector<CreationCount>& rows);

struct GiniRow {
    Address scheme;
    Rat gini_in_pct;
    Rat gini_out_pct;
    Rat total_in_usd;
    Rat total_out_usd;
};
void write_gini_csv(const std::filesystem::path& path, const std::vector<GiniRow>& rows);

} // namespace ponzi::metrics
