#ifndef DEBTLEDGER_GENESIS_HPP
#define DEBTLEDGER_GENESIS_HPP

#include <debtledger/block.hpp>
#include <debtledger/ledger.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

namespace debtledger {

struct Allocation {
    Hash32 pubkey_hash;
    Amount amount = 0;
};

/// Chain configuration fixed at height 0. The issuer set never changes after.
struct Genesis {
    std::vector<PubKey> validators;
    std::vector<PubKey> issuers;
    std::vector<Allocation> allocations;

    /// Throws std::invalid_argument with a description on any schema error.
    static Genesis from_json(const nlohmann::json& j);
    static Genesis parse(std::string_view text);
    static Genesis load(const std::filesystem::path& path);

    nlohmann::json to_json() const;
};

/// The single coinbase minting every allocation, or nullopt when there are none.
std::optional<Transaction> genesis_coinbase(const Genesis& genesis);

Block genesis_block(const Genesis& genesis);

/// State after height 0.
LedgerState genesis_state(const Genesis& genesis);

} // namespace debtledger

#endif
