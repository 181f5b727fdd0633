#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ponzi/rational.hpp"
#include "ponzi/types.hpp"

namespace ponzi {

// One ledger row, external (user-initiated) or internal (contract-triggered).
// Rows in a file must be sorted by block number; original order is kept for
// equal blocks.
struct Transaction {
    std::uint64_t block_number = 0;
    UnixSeconds timestamp = 0;
    Address from;
    Address to;
    Wei value = 0;
    bool is_error = false;
    bool is_internal = false;

    bool operator==(const Transaction&) const = default;
};

enum class SchemeKind { kPublic, kHidden };
enum class SchemeArchetype { kArray, kTree, kHandover, kWaterfall, kOther, kUnknown };

struct SchemeDescriptor {
    Address address;
    std::string name;
    SchemeKind kind = SchemeKind::kPublic;
    SchemeArchetype archetype = SchemeArchetype::kUnknown;
};

std::string_view to_string(SchemeKind k);
std::string_view to_string(SchemeArchetype a);
SchemeKind scheme_kind_from_string(std::string_view s);
SchemeArchetype scheme_archetype_from_string(std::string_view s);

// date -> average USD per ETH on that day
class RateTable {
public:
    void insert(EpochDay date, Rat usd_per_eth);
    const Rat* find(EpochDay date) const;
    bool contains(EpochDay date) const { return find(date) != nullptr; }
    std::size_t size() const { return rates_.size(); }
    const std::map<EpochDay, Rat>& entries() const { return rates_; }

private:
    std::map<EpochDay, Rat> rates_;
};

// CSV schema: block_number,timestamp,from,to,value_wei,is_error,is_internal
inline constexpr std::string_view kTransactionCsvHeader =
    "block_number,timestamp,from,to,value_wei,is_error,is_internal";

std::vector<Transaction> load_transactions(const std::filesystem::path& path);
std::vector<Transaction> parse_transactions(std::istream& in, const std::string& source_name);
void save_transactions(std::ostream& out, const std::vector<Transaction>& txs);
void save_transactions(const std::filesystem::path& path, const std::vector<Transaction>& txs);

// CSV schema: date,usd_per_eth
RateTable load_rates(const std::filesystem::path& path);
RateTable parse_rates(std::istream& in, const std::string& source_name);

// JSONL, one object per line: {"address":..,"name":..,"kind":..,"archetype":..}
std::vector<SchemeDescriptor> load_scheme_manifest(const std::filesystem::path& path);

enum class FlowKind { kIncoming, kOutgoing, kUnrelated };

// Value flow of a transaction relative to a scheme address. Error-flagged
// rows move no value, so they are always unrelated. A transfer into the
// scheme (external deposit or wallet-mediated internal transfer) is
// incoming; an internal transfer out of the scheme is the payout.
FlowKind classify_flow(const Transaction& tx, const Address& scheme);

// Replays a trace and checks that the scheme never sends more than it
// received (per prefix) and reports the implied final balance. Returns an
// error description on breach.
struct ConservationCheck {
    Wei total_in = 0;
    Wei total_out = 0;
    Wei balance = 0; // total_in - total_out
};
std::optional<std::string> verify_conservation(const std::vector<Transaction>& txs,
                                               const Address& scheme,
                                               ConservationCheck* out = nullptr);

} // namespace ponzi
