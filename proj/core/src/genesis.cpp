#include <debtledger/genesis.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace debtledger {

namespace {

template <typename T>
T parse_fixed(const nlohmann::json& value, const char* what)
{
    if (!value.is_string()) throw std::invalid_argument(std::string(what) + " must be a hex string");
    auto parsed = T::from_hex(value.get<std::string>());
    if (!parsed) throw std::invalid_argument(std::string(what) + " is not " + std::to_string(T::size()) + " bytes of hex");
    return *parsed;
}

std::vector<PubKey> parse_keys(const nlohmann::json& j, const char* field)
{
    std::vector<PubKey> keys;
    if (!j.contains(field)) throw std::invalid_argument(std::string("genesis is missing ") + field);
    if (!j[field].is_array()) throw std::invalid_argument(std::string(field) + " must be an array");
    for (const auto& k : j[field]) keys.push_back(parse_fixed<PubKey>(k, field));
    return keys;
}

} // namespace

Genesis Genesis::from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw std::invalid_argument("genesis must be a JSON object");
    Genesis g;
    g.validators = parse_keys(j, "validators");
    g.issuers = parse_keys(j, "issuers");
    if (!j.contains("allocations") || !j["allocations"].is_array())
        throw std::invalid_argument("allocations must be an array");
    Amount total = 0;
    for (const auto& a : j["allocations"]) {
        if (!a.is_object() || !a.contains("pubkey_hash") || !a.contains("amount"))
            throw std::invalid_argument("allocation needs pubkey_hash and amount");
        if (!a["amount"].is_number_unsigned() || a["amount"].get<Amount>() == 0)
            throw std::invalid_argument("allocation amount must be a positive integer");
        auto sum = checked_add(total, a["amount"].get<Amount>());
        if (!sum) throw std::invalid_argument("allocations overflow 64 bits");
        total = *sum;
        g.allocations.push_back({parse_fixed<Hash32>(a["pubkey_hash"], "pubkey_hash"), a["amount"].get<Amount>()});
    }
    return g;
}

Genesis Genesis::parse(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("genesis is not valid JSON: ") + e.what());
    }
    return from_json(j);
}

Genesis Genesis::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open genesis file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

nlohmann::json Genesis::to_json() const
{
    nlohmann::json j;
    j["validators"] = nlohmann::json::array();
    for (const auto& k : validators) j["validators"].push_back(k.hex());
    j["issuers"] = nlohmann::json::array();
    for (const auto& k : issuers) j["issuers"].push_back(k.hex());
    j["allocations"] = nlohmann::json::array();
    for (const auto& a : allocations) j["allocations"].push_back({{"pubkey_hash", a.pubkey_hash.hex()}, {"amount", a.amount}});
    return j;
}

std::optional<Transaction> genesis_coinbase(const Genesis& genesis)
{
    if (genesis.allocations.empty()) return std::nullopt;
    Transaction tx;
    tx.kind = TxKind::coinbase;
    TxInput in;
    in.output_index = kCoinbaseIndex;
    tx.inputs.push_back(in);
    for (const auto& a : genesis.allocations) tx.outputs.push_back({a.amount, {a.pubkey_hash}});
    return tx;
}

Block genesis_block(const Genesis& genesis)
{
    std::vector<Transaction> txs;
    if (auto cb = genesis_coinbase(genesis)) txs.push_back(std::move(*cb));
    return make_block(0, Hash32{}, 0, std::move(txs));
}

LedgerState genesis_state(const Genesis& genesis)
{
    LedgerState state(genesis.issuers);
    if (auto cb = genesis_coinbase(genesis)) state.apply_genesis(*cb);
    return state;
}

} // namespace debtledger
