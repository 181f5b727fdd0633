#include "ponzi/ledger.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace ponzi {

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

bool parse_bool01(std::string_view s, bool& out) {
    if (s == "0") { out = false; return true; }
    if (s == "1") { out = true; return true; }
    return false;
}

[[noreturn]] void row_error(const std::string& source, std::size_t row, const std::string& what) {
    throw Error(source + ": row " + std::to_string(row) + ": " + what);
}

} // namespace

std::string_view to_string(SchemeKind k) {
    return k == SchemeKind::kPublic ? "public" : "hidden";
}

std::string_view to_string(SchemeArchetype a) {
    switch (a) {
        case SchemeArchetype::kArray: return "array";
        case SchemeArchetype::kTree: return "tree";
        case SchemeArchetype::kHandover: return "handover";
        case SchemeArchetype::kWaterfall: return "waterfall";
        case SchemeArchetype::kOther: return "other";
        case SchemeArchetype::kUnknown: return "unknown";
    }
    return "unknown";
}

SchemeKind scheme_kind_from_string(std::string_view s) {
    if (s == "public") return SchemeKind::kPublic;
    if (s == "hidden") return SchemeKind::kHidden;
    throw Error("bad scheme kind '" + std::string(s) + "'");
}

SchemeArchetype scheme_archetype_from_string(std::string_view s) {
    if (s == "array") return SchemeArchetype::kArray;
    if (s == "tree") return SchemeArchetype::kTree;
    if (s == "handover") return SchemeArchetype::kHandover;
    if (s == "waterfall") return SchemeArchetype::kWaterfall;
    if (s == "other") return SchemeArchetype::kOther;
    if (s == "unknown") return SchemeArchetype::kUnknown;
    throw Error("bad scheme archetype '" + std::string(s) + "'");
}

void RateTable::insert(EpochDay date, Rat usd_per_eth) {
    if (usd_per_eth <= 0)
        throw Error("non-positive rate for " + format_date(date));
    auto [it, inserted] = rates_.emplace(date, std::move(usd_per_eth));
    if (!inserted) throw Error("duplicate rate date " + format_date(date));
}

const Rat* RateTable::find(EpochDay date) const {
    auto it = rates_.find(date);
    return it == rates_.end() ? nullptr : &it->second;
}

std::vector<Transaction> parse_transactions(std::istream& in, const std::string& source_name) {
    std::string line;
    if (!std::getline(in, line))
        throw Error(source_name + ": missing header row");
    if (strip_cr(line) != kTransactionCsvHeader)
        throw Error(source_name + ": bad header (want '" + std::string(kTransactionCsvHeader) + "')");

    std::vector<Transaction> txs;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (line.empty()) continue;
        ++row;
        auto fields = split_csv(line);
        if (fields.size() != 7)
            row_error(source_name, row, "expected 7 columns, got " + std::to_string(fields.size()));
        Transaction tx;
        try {
            tx.block_number = static_cast<std::uint64_t>(parse_u128(fields[0]));
            tx.timestamp = parse_datetime(fields[1]);
            tx.from = Address::parse(fields[2]);
            tx.to = Address::parse(fields[3]);
            tx.value = parse_u128(fields[4]);
            if (!parse_bool01(fields[5], tx.is_error))
                throw Error("bad boolean '" + std::string(fields[5]) + "'");
            if (!parse_bool01(fields[6], tx.is_internal))
                throw Error("bad boolean '" + std::string(fields[6]) + "'");
        } catch (const Error& e) {
            row_error(source_name, row, e.what());
        }
        if (!txs.empty() && tx.block_number < txs.back().block_number)
            throw Error(source_name + ": unsorted at row " + std::to_string(row) +
                        " (block " + std::to_string(tx.block_number) + " after " +
                        std::to_string(txs.back().block_number) + ")");
        txs.push_back(tx);
    }
    return txs;
}

std::vector<Transaction> load_transactions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return parse_transactions(in, path.string());
}

void save_transactions(std::ostream& out, const std::vector<Transaction>& txs) {
    out << kTransactionCsvHeader << '\n';
    for (const auto& tx : txs) {
        out << tx.block_number << ',' << format_datetime(tx.timestamp) << ','
            << tx.from.str() << ',' << tx.to.str() << ',' << to_string(tx.value) << ','
            << (tx.is_error ? '1' : '0') << ',' << (tx.is_internal ? '1' : '0') << '\n';
    }
}

void save_transactions(const std::filesystem::path& path, const std::vector<Transaction>& txs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    save_transactions(out, txs);
}

RateTable parse_rates(std::istream& in, const std::string& source_name) {
    std::string line;
    if (!std::getline(in, line))
        throw Error(source_name + ": missing header row");
    if (strip_cr(line) != "date,usd_per_eth")
        throw Error(source_name + ": bad header (want 'date,usd_per_eth')");

    RateTable table;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (line.empty()) continue;
        ++row;
        auto fields = split_csv(line);
        if (fields.size() != 2)
            row_error(source_name, row, "expected 2 columns, got " + std::to_string(fields.size()));
        try {
            table.insert(parse_date(fields[0]), parse_decimal(fields[1]));
        } catch (const Error& e) {
            row_error(source_name, row, e.what());
        }
    }
    return table;
}

RateTable load_rates(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return parse_rates(in, path.string());
}

std::vector<SchemeDescriptor> load_scheme_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<SchemeDescriptor> schemes;
    std::string line;
    std::size_t row = 0;
    std::map<Address, std::size_t> seen;
    while (std::getline(in, line)) {
        line = strip_cr(line);
        ++row;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            row_error(path.string(), row, e.what());
        }
        try {
            SchemeDescriptor d;
            d.address = Address::parse(j.at("address").get<std::string>());
            d.name = j.value("name", std::string{});
            d.kind = scheme_kind_from_string(j.value("kind", "public"));
            d.archetype = scheme_archetype_from_string(j.value("archetype", "unknown"));
            auto [it, inserted] = seen.emplace(d.address, row);
            if (!inserted)
                throw Error("duplicate address " + d.address.str() +
                            " (first seen at line " + std::to_string(it->second) + ")");
            schemes.push_back(std::move(d));
        } catch (const nlohmann::json::exception& e) {
            row_error(path.string(), row, e.what());
        } catch (const Error& e) {
            row_error(path.string(), row, e.what());
        }
    }
    return schemes;
}

FlowKind classify_flow(const Transaction& tx, const Address& scheme) {
    if (tx.is_error) return FlowKind::kUnrelated; // reverted transfers move no value
    if (tx.to == scheme) return FlowKind::kIncoming;
    if (tx.is_internal && tx.from == scheme) return FlowKind::kOutgoing;
    return FlowKind::kUnrelated;
}

std::optional<std::string> verify_conservation(const std::vector<Transaction>& txs,
                                               const Address& scheme,
                                               ConservationCheck* out) {
    Wei in = 0, outgoing = 0;
    for (std::size_t i = 0; i < txs.size(); ++i) {
        switch (classify_flow(txs[i], scheme)) {
            case FlowKind::kIncoming: in += txs[i].value; break;
            case FlowKind::kOutgoing: outgoing += txs[i].value; break;
            case FlowKind::kUnrelated: break;
        }
        if (outgoing > in)
            return "conservation breach at row " + std::to_string(i + 1) + ": outgoing " +
                   to_string(outgoing) + " wei exceeds incoming " + to_string(in) + " wei";
    }
    if (out) *out = ConservationCheck{in, outgoing, in - outgoing};
    return std::nullopt;
}

} // namespace ponzi
