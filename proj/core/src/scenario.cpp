#include "ponzi/scenario.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <limits>

namespace ponzi::scenario {

namespace {

using nlohmann::json;

// Cursor that carries the document path into every error message.
struct Ctx {
    const std::string& source;
    std::string path;

    Ctx at(const std::string& key) const {
        return Ctx{source, path.empty() ? key : path + "." + key};
    }
    Ctx index(std::size_t i) const { return Ctx{source, path + "[" + std::to_string(i) + "]"}; }

    [[noreturn]] void err(const std::string& what) const {
        throw Error(source + ": " + (path.empty() ? "<root>" : path) + ": " + what);
    }
};

const json& require(const json& j, const Ctx& ctx, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) ctx.err("missing key '" + std::string(key) + "'");
    return *it;
}

std::string get_string(const json& j, const Ctx& ctx) {
    if (!j.is_string()) ctx.err("expected a string");
    return j.get<std::string>();
}

Address get_address(const json& j, const Ctx& ctx) {
    auto a = Address::try_parse(get_string(j, ctx));
    if (!a) ctx.err("expected an address (0x + 40 hex digits)");
    return *a;
}

Wei get_wei(const json& j, const Ctx& ctx) {
    // ~10^27 wei is a billion ETH, far above total supply; larger values
    // are typos and would eventually push balances toward wraparound.
    static const Wei kMaxPlausible = Wei(1'000'000'000) * kWeiPerEth;
    std::optional<Wei> value;
    try {
        if (j.is_number_unsigned()) value = Wei(j.get<std::uint64_t>());
        if (j.is_string()) value = parse_u128(j.get<std::string>());
    } catch (const Error&) {
    }
    if (!value) ctx.err("expected wei as a decimal string or unsigned integer");
    if (*value > kMaxPlausible) ctx.err("implausible wei amount (max 10^9 ETH)");
    return *value;
}

std::uint64_t get_u64(const json& j, const Ctx& ctx) {
    if (!j.is_number_unsigned()) ctx.err("expected an unsigned integer");
    return j.get<std::uint64_t>();
}

UnixSeconds get_datetime(const json& j, const Ctx& ctx) {
    try {
        return parse_datetime(get_string(j, ctx));
    } catch (const Error& e) {
        ctx.err(e.what());
    }
}

sim::Fraction get_fraction(const json& j, const Ctx& ctx) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() ||
        !j[1].is_number_unsigned())
        ctx.err("expected [num, den]");
    sim::Fraction f{j[0].get<std::uint64_t>(), j[1].get<std::uint64_t>()};
    if (f.den == 0) ctx.err("denominator must be positive");
    return f;
}

sim::Archetype get_archetype(const json& j, const Ctx& ctx) {
    std::string s = get_string(j, ctx);
    if (s == "array") return sim::Archetype::kArray;
    if (s == "tree") return sim::Archetype::kTree;
    if (s == "handover") return sim::Archetype::kHandover;
    if (s == "waterfall") return sim::Archetype::kWaterfall;
    if (s == "hyip_daily") return sim::Archetype::kHyipDaily;
    ctx.err("unknown archetype '" + s + "'");
}

void reject_unknown_keys(const json& j, const Ctx& ctx,
                         std::initializer_list<const char*> known) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok |= key == k;
        if (!ok) ctx.at(key).err("unknown key");
    }
}

sim::SchemeParams get_params(const json& j, const Ctx& ctx) {
    if (!j.is_object()) ctx.err("expected an object");
    reject_unknown_keys(j, ctx,
                        {"archetype", "multiplier", "owner_fee", "min_toll_wei", "payout_rate",
                         "price_growth", "initial_price_wei", "reject_policy",
                         "first_deposit_to_owner", "clear_gas_per_item", "bugs"});
    sim::SchemeParams p;
    p.archetype = get_archetype(require(j, ctx, "archetype"), ctx.at("archetype"));
    if (j.contains("multiplier")) p.multiplier = get_fraction(j["multiplier"], ctx.at("multiplier"));
    if (j.contains("owner_fee")) p.owner_fee = get_fraction(j["owner_fee"], ctx.at("owner_fee"));
    if (j.contains("min_toll_wei")) p.min_toll = get_wei(j["min_toll_wei"], ctx.at("min_toll_wei"));
    if (j.contains("payout_rate"))
        p.payout_rate = get_fraction(j["payout_rate"], ctx.at("payout_rate"));
    if (j.contains("price_growth"))
        p.price_growth = get_fraction(j["price_growth"], ctx.at("price_growth"));
    if (j.contains("initial_price_wei"))
        p.initial_price = get_wei(j["initial_price_wei"], ctx.at("initial_price_wei"));
    if (j.contains("reject_policy")) {
        std::string s = get_string(j["reject_policy"], ctx.at("reject_policy"));
        if (s == "refund")
            p.reject_policy = sim::RejectPolicy::kRefund;
        else if (s == "keep")
            p.reject_policy = sim::RejectPolicy::kKeep;
        else
            ctx.at("reject_policy").err("expected 'refund' or 'keep'");
    }
    if (j.contains("first_deposit_to_owner")) {
        const json& v = j["first_deposit_to_owner"];
        if (!v.is_boolean()) ctx.at("first_deposit_to_owner").err("expected a boolean");
        p.first_deposit_to_owner = v.get<bool>();
    }
    if (j.contains("clear_gas_per_item"))
        p.clear_gas_per_item = get_u64(j["clear_gas_per_item"], ctx.at("clear_gas_per_item"));
    if (j.contains("bugs")) {
        const json& bugs = j["bugs"];
        if (!bugs.is_array()) ctx.at("bugs").err("expected an array of bug names");
        for (std::size_t i = 0; i < bugs.size(); ++i) {
            Ctx bctx = ctx.at("bugs").index(i);
            std::string s = get_string(bugs[i], bctx);
            if (s == "unchecked_send")
                p.bugs |= sim::kUncheckedSend;
            else if (s == "accumulating_fees")
                p.bugs |= sim::kAccumulatingFees;
            else if (s == "cursor_not_reset")
                p.bugs |= sim::kCursorNotReset;
            else if (s == "open_constructor")
                p.bugs |= sim::kOpenConstructor;
            else if (s == "gas_limited_clear")
                p.bugs |= sim::kGasLimitedClear;
            else
                bctx.err("unknown bug '" + s + "'");
        }
    }
    try {
        p.validate();
    } catch (const Error& e) {
        ctx.err(e.what());
    }
    return p;
}

sim::SimEvent get_event(const json& j, const Ctx& ctx) {
    if (!j.is_object()) ctx.err("expected an object");
    reject_unknown_keys(j, ctx, {"kind", "at", "from", "value_wei", "inviter", "gas_limit"});
    std::string kind = get_string(require(j, ctx, "kind"), ctx.at("kind"));
    UnixSeconds at = get_datetime(require(j, ctx, "at"), ctx.at("at"));
    if (kind == "deposit") {
        Address from = get_address(require(j, ctx, "from"), ctx.at("from"));
        Wei value = get_wei(require(j, ctx, "value_wei"), ctx.at("value_wei"));
        std::optional<Address> inviter;
        if (j.contains("inviter")) inviter = get_address(j["inviter"], ctx.at("inviter"));
        return sim::SimEvent::deposit(at, from, value, inviter);
    }
    if (kind == "owner_withdraw") return sim::SimEvent::owner_withdraw(at);
    if (kind == "daily_tick") return sim::SimEvent::daily_tick(at);
    if (kind == "constructor_call")
        return sim::SimEvent::constructor_call(
            at, get_address(require(j, ctx, "from"), ctx.at("from")));
    if (kind == "clear_array")
        return sim::SimEvent::clear_array(at,
                                          get_u64(require(j, ctx, "gas_limit"), ctx.at("gas_limit")));
    ctx.at("kind").err("unknown event kind '" + kind + "'");
}

std::vector<attacks::NamedDeposit> get_deposits(const json& j, const Ctx& ctx) {
    if (!j.is_array()) ctx.err("expected an array");
    std::vector<attacks::NamedDeposit> deposits;
    deposits.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        Ctx dctx = ctx.index(i);
        if (!j[i].is_object()) dctx.err("expected an object");
        deposits.push_back(attacks::NamedDeposit{
            get_address(require(j[i], dctx, "from"), dctx.at("from")),
            get_wei(require(j[i], dctx, "value_wei"), dctx.at("value_wei"))});
    }
    return deposits;
}

json parse_json(const std::string& text, const std::string& source_name) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(source_name + ": " + e.what());
    }
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

} // namespace

sim::FailureOracle Simulation::oracle() const {
    // copy: the oracle may outlive the scenario object
    auto failing = failing_recipients;
    return [failing = std::move(failing)](const Address& to) { return failing.contains(to); };
}

Simulation parse_simulation(const std::string& text, const std::string& source_name) {
    json j = parse_json(text, source_name);
    Ctx root{source_name, ""};
    if (!j.is_object()) root.err("expected a JSON object");

    Simulation s;
    s.scheme = get_address(require(j, root, "scheme"), root.at("scheme"));
    s.owner = get_address(require(j, root, "owner"), root.at("owner"));
    s.params = get_params(require(j, root, "params"), root.at("params"));

    const json& events = require(j, root, "events");
    Ctx ectx = root.at("events");
    if (!events.is_array()) ectx.err("expected an array");
    UnixSeconds prev = std::numeric_limits<UnixSeconds>::min();
    for (std::size_t i = 0; i < events.size(); ++i) {
        sim::SimEvent ev = get_event(events[i], ectx.index(i));
        if (ev.at < prev) ectx.index(i).err("events must be in non-decreasing time order");
        prev = ev.at;
        s.events.push_back(ev);
    }

    if (j.contains("failing_recipients")) {
        const json& fr = j["failing_recipients"];
        Ctx fctx = root.at("failing_recipients");
        if (!fr.is_array()) fctx.err("expected an array of addresses");
        for (std::size_t i = 0; i < fr.size(); ++i)
            s.failing_recipients.insert(get_address(fr[i], fctx.index(i)));
    }
    return s;
}

Simulation load_simulation(const std::filesystem::path& path) {
    return parse_simulation(slurp(path), path.string());
}

AttackScenario parse_attack(const std::string& text, const std::string& source_name) {
    json j = parse_json(text, source_name);
    Ctx root{source_name, ""};
    if (!j.is_object()) root.err("expected a JSON object");
    std::string kind = get_string(require(j, root, "attack"), root.at("attack"));

    if (kind == "dos") {
        attacks::DosScenario s;
        s.scheme = get_address(require(j, root, "scheme"), root.at("scheme"));
        s.owner = get_address(require(j, root, "owner"), root.at("owner"));
        s.params = get_params(require(j, root, "params"), root.at("params"));
        s.honest_deposits =
            get_deposits(require(j, root, "honest_deposits"), root.at("honest_deposits"));
        const json& atk = require(j, root, "attacker");
        Ctx actx = root.at("attacker");
        if (!atk.is_object()) actx.err("expected an object");
        s.attacker.address = get_address(require(atk, actx, "address"), actx.at("address"));
        if (atk.contains("throws_on_receive")) {
            const json& v = atk["throws_on_receive"];
            if (!v.is_boolean()) actx.at("throws_on_receive").err("expected a boolean");
            s.attacker.throws_on_receive = v.get<bool>();
        }
        if (atk.contains("budget_wei"))
            s.attacker.budget = get_wei(atk["budget_wei"], actx.at("budget_wei"));
        if (j.contains("ticks")) s.ticks = get_u64(j["ticks"], root.at("ticks"));
        if (j.contains("start")) s.start = get_datetime(j["start"], root.at("start"));
        return s;
    }
    if (kind == "shutdown") {
        attacks::ShutdownScenario s;
        s.scheme = get_address(require(j, root, "scheme"), root.at("scheme"));
        s.owner = get_address(require(j, root, "owner"), root.at("owner"));
        s.params = get_params(require(j, root, "params"), root.at("params"));
        if (j.contains("prior_deposits"))
            s.prior_deposits = get_deposits(j["prior_deposits"], root.at("prior_deposits"));
        s.oscar = get_address(require(j, root, "oscar"), root.at("oscar"));
        s.oscar_amount = get_wei(require(j, root, "oscar_amount_wei"), root.at("oscar_amount_wei"));
        if (j.contains("subsequent_deposits"))
            s.subsequent_deposits =
                get_deposits(j["subsequent_deposits"], root.at("subsequent_deposits"));
        if (j.contains("start")) s.start = get_datetime(j["start"], root.at("start"));
        return s;
    }
    root.at("attack").err("unknown attack '" + kind + "' (want 'dos' or 'shutdown')");
}

AttackScenario load_attack(const std::filesystem::path& path) {
    return parse_attack(slurp(path), path.string());
}

} // namespace ponzi::scenario
