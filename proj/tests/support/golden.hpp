#ifndef DEBTLEDGER_TEST_GOLDEN_HPP
#define DEBTLEDGER_TEST_GOLDEN_HPP

#include <debtledger/transaction.hpp>

#include <nlohmann/json.hpp>

#include <map>
#include <string>

namespace debtledger::test {

/// Structured transaction as written by the oracle script.
inline Transaction tx_from_json(const nlohmann::json& j)
{
    static const std::map<std::string, TxKind> kinds{{"normal", TxKind::normal},
                                                      {"coinbase", TxKind::coinbase},
                                                      {"debt", TxKind::debt},
                                                      {"outstanding_debt", TxKind::outstanding_debt}};
    Transaction tx;
    tx.version = j["version"].get<std::uint16_t>();
    tx.kind = kinds.at(j["kind"].get<std::string>());
    for (const auto& i : j["inputs"]) {
        TxInput in;
        in.prev_field = *Hash32::from_hex(i["prev_field"].get<std::string>());
        in.output_index = i["output_index"].get<std::int32_t>();
        in.unlock_pubkey = *PubKey::from_hex(i["unlock_pubkey"].get<std::string>());
        in.unlock_sig = *Signature::from_hex(i["unlock_sig"].get<std::string>());
        tx.inputs.push_back(in);
    }
    for (const auto& o : j["outputs"])
        tx.outputs.push_back({o["amount"].get<Amount>(), {*Hash32::from_hex(o["pubkey_hash"].get<std::string>())}});
    tx.locktime = j["locktime"].get<std::uint32_t>();
    tx.loan_type = j["loan_type"].get<std::uint16_t>();
    tx.debt_ref = *Hash32::from_hex(j["debt_ref"].get<std::string>());
    return tx;
}

} // namespace debtledger::test

#endif
