#include "ponzi/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

namespace ponzi::metrics {

namespace {

const Rat& rate_for(const Transaction& tx, const RateTable& rates) {
    const Rat* rate = rates.find(day_of(tx.timestamp));
    if (!rate) throw Error("missing rate for " + format_date(day_of(tx.timestamp)));
    return *rate;
}

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

std::string usd_str(const Rat& v) { return format_decimal(v, 6); }
std::string pct_str(const Rat& v) { return format_decimal(v, 6); }

} // namespace

Rat usd_value(const Transaction& tx, const RateTable& rates) {
    Rat wei(bigint_from_u128(tx.value), BigInt(1));
    return wei * rate_for(tx, rates) / Rat(bigint_from_u128(kWeiPerEth), BigInt(1));
}

BigInt to_usd_micro(const Transaction& tx, const RateTable& rates) {
    return round_half_even_scaled(usd_value(tx, rates), 6);
}

int lifetime_days(const std::vector<Transaction>& txs) {
    if (txs.empty()) throw Error("lifetime of an empty transaction list");
    UnixSeconds first = txs.front().timestamp, last = txs.front().timestamp;
    for (const auto& tx : txs) {
        first = std::min(first, tx.timestamp);
        last = std::max(last, tx.timestamp);
    }
    return day_of(last) - day_of(first);
}

FlowSummary flow_summary(const std::vector<Transaction>& txs, const Address& scheme,
                         const RateTable& rates) {
    FlowSummary s;
    std::set<Address> paying, paid;
    for (const auto& tx : txs) {
        switch (classify_flow(tx, scheme)) {
            case FlowKind::kIncoming:
                ++s.in_tx_count;
                s.in_wei += tx.value;
                s.in_usd += usd_value(tx, rates);
                if (tx.value > 0) paying.insert(tx.from);
                break;
            case FlowKind::kOutgoing:
                ++s.out_tx_count;
                s.out_wei += tx.value;
                s.out_usd += usd_value(tx, rates);
                if (tx.value > 0) paid.insert(tx.to);
                break;
            case FlowKind::kUnrelated:
                break;
        }
    }
    s.paying_users = paying.size();
    s.paid_users = paid.size();
    return s;
}

std::vector<UserNet> user_nets(const std::vector<Transaction>& txs, const Address& scheme,
                               const RateTable& rates) {
    std::map<Address, UserNet> by_addr;
    auto slot = [&](const Address& a) -> UserNet& {
        auto [it, inserted] = by_addr.try_emplace(a);
        if (inserted) it->second.address = a;
        return it->second;
    };
    for (const auto& tx : txs) {
        switch (classify_flow(tx, scheme)) {
            case FlowKind::kIncoming:
                if (tx.from != scheme && !tx.from.is_null())
                    slot(tx.from).sent_usd += usd_value(tx, rates);
                break;
            case FlowKind::kOutgoing:
                if (tx.to != scheme && !tx.to.is_null())
                    slot(tx.to).received_usd += usd_value(tx, rates);
                break;
            case FlowKind::kUnrelated:
                break;
        }
    }
    std::vector<UserNet> nets;
    nets.reserve(by_addr.size());
    for (auto& [addr, net] : by_addr) {
        net.net_usd = net.received_usd - net.sent_usd;
        nets.push_back(std::move(net));
    }
    return nets;
}

std::vector<Rat> gains_ascending(const std::vector<UserNet>& nets) {
    std::vector<Rat> gains;
    for (const auto& n : nets)
        if (n.net_usd > 0) gains.push_back(n.net_usd);
    std::sort(gains.begin(), gains.end());
    return gains;
}

std::vector<Rat> losses_ascending(const std::vector<UserNet>& nets) {
    std::vector<Rat> losses;
    for (const auto& n : nets)
        if (n.net_usd < 0) losses.push_back(-n.net_usd);
    std::sort(losses.begin(), losses.end());
    return losses;
}

std::vector<DailyVolume> daily_volume(const std::vector<Transaction>& txs, const Address& scheme,
                                      const RateTable& rates) {
    std::map<EpochDay, std::pair<Rat, Rat>> days;
    for (const auto& tx : txs) {
        switch (classify_flow(tx, scheme)) {
            case FlowKind::kIncoming:
                days[day_of(tx.timestamp)].first += usd_value(tx, rates);
                break;
            case FlowKind::kOutgoing:
                days[day_of(tx.timestamp)].second += usd_value(tx, rates);
                break;
            case FlowKind::kUnrelated:
                break;
        }
    }
    std::vector<DailyVolume> rows;
    rows.reserve(days.size());
    for (auto& [date, inout] : days)
        rows.push_back(DailyVolume{date, std::move(inout.first), std::move(inout.second)});
    return rows;
}

InequalityCurve lorenz(std::vector<Rat> values) {
    if (values.empty()) throw Error("lorenz needs at least one value");
    Rat total;
    for (const auto& v : values) {
        if (v < 0) throw Error("lorenz values must be non-negative");
        total += v;
    }
    if (total == 0) throw Error("lorenz needs at least one positive value");

    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();

    InequalityCurve curve;
    curve.points.reserve(n + 1);
    curve.points.push_back(LorenzPoint{Rat(0), Rat(0)});
    Rat prefix;
    for (std::size_t i = 1; i <= n; ++i) {
        prefix += values[i - 1];
        curve.points.push_back(LorenzPoint{Rat(100 * BigInt(i), BigInt(n)),
                                           Rat(100) * prefix / total});
    }

    // Mean absolute pairwise difference over twice the mean; on a sorted
    // vector sum|xi-xj| = 2 * sum_i (2i - n - 1) * x_i (1-based i).
    Rat weighted;
    for (std::size_t i = 1; i <= n; ++i)
        weighted += Rat(BigInt(2 * static_cast<long long>(i) - static_cast<long long>(n) - 1)) *
                    values[i - 1];
    curve.gini_pct = Rat(100) * weighted / (Rat(BigInt(n)) * total);
    return curve;
}

std::vector<CreationCount> creation_timeline(
    const std::vector<std::pair<SchemeDescriptor, EpochDay>>& first_dates) {
    std::map<std::pair<std::string, SchemeKind>, std::size_t> counts;
    for (const auto& [descriptor, first_day] : first_dates)
        ++counts[{format_year_month(first_day), descriptor.kind}];
    std::vector<CreationCount> rows;
    rows.reserve(counts.size());
    for (const auto& [key, count] : counts)
        rows.push_back(CreationCount{key.first, key.second, count});
    return rows;
}

void write_volume_csv(const std::filesystem::path& path, const std::vector<DailyVolume>& rows) {
    auto out = open_csv(path);
    out << "date,in_usd,out_usd\n";
    for (const auto& r : rows)
        out << format_date(r.date) << ',' << usd_str(r.in_usd) << ',' << usd_str(r.out_usd)
            << '\n';
}

void write_lorenz_csv(const std::filesystem::path& path, const InequalityCurve& curve) {
    auto out = open_csv(path);
    out << "pop_pct,value_pct\n";
    for (const auto& p : curve.points)
        out << pct_str(p.population_pct) << ',' << pct_str(p.value_pct) << '\n';
}

void write_gains_losses_csv(const std::filesystem::path& path, const std::vector<Rat>& gains,
                            const std::vector<Rat>& losses) {
    auto out = open_csv(path);
    out << "rank,gain_usd,rank,loss_usd\n";
    std::size_t rows = std::max(gains.size(), losses.size());
    for (std::size_t i = 0; i < rows; ++i) {
        if (i < gains.size())
            out << i + 1 << ',' << usd_str(gains[i]);
        else
            out << ',';
        if (i < losses.size())
            out << ',' << i + 1 << ',' << usd_str(losses[i]);
        else
            out << ",,";
        out << '\n';
    }
}

void write_lifetime_csv(const std::filesystem::path& path,
                        const std::vector<std::pair<SchemeKind, int>>& lifetimes) {
    // One ranked series per kind, longest-lived first.
    std::map<SchemeKind, std::vector<int>> by_kind;
    for (const auto& [kind, days] : lifetimes) by_kind[kind].push_back(days);
    auto out = open_csv(path);
    out << "rank,kind,days\n";
    for (auto& [kind, days] : by_kind) {
        std::sort(days.begin(), days.end(), std::greater<>());
        for (std::size_t i = 0; i < days.size(); ++i)
            out << i + 1 << ',' << to_string(kind) << ',' << days[i] << '\n';
    }
}

void write_creation_csv(const std::filesystem::path& path,
                        const std::vector<CreationCount>& rows) {
    auto out = open_csv(path);
    out << "month,kind,count\n";
    for (const auto& r : rows)
        out << r.year_month << ',' << to_string(r.kind) << ',' << r.count << '\n';
}

void write_gini_csv(const std::filesystem::path& path, const std::vector<GiniRow>& rows) {
    auto out = open_csv(path);
    out << "scheme,gini_in_pct,gini_out_pct,total_in_usd,total_out_usd\n";
    for (const auto& r : rows)
        out << r.scheme.str() << ',' << pct_str(r.gini_in_pct) << ',' << pct_str(r.gini_out_pct)
            << ',' << usd_str(r.total_in_usd) << ',' << usd_str(r.total_out_usd) << '\n';
}

} // namespace ponzi::metrics
