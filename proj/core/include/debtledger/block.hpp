#ifndef DEBTLEDGER_BLOCK_HPP
#define DEBTLEDGER_BLOCK_HPP

#include <debtledger/transaction.hpp>

#include <nlohmann/json.hpp>

#include <vector>

namespace debtledger {

struct Block {
    std::uint64_t height = 0;
    Hash32 prev_hash;
    std::uint32_t proposer = 0;
    Hash32 merkle_root;
    std::vector<Transaction> txs;

    bool operator==(const Block&) const = default;
};

/// Merkle root over tx hashes; all zeros for an empty list.
Hash32 transactions_root(const std::vector<Transaction>& txs);

Block make_block(std::uint64_t height, const Hash32& prev_hash, std::uint32_t proposer,
                 std::vector<Transaction> txs);

/// SHA-256 over height, prev_hash, proposer and merkle_root (little-endian).
/// The transactions are committed through the merkle root.
Hash32 block_hash(const Block& block);

bool merkle_consistent(const Block& block);

nlohmann::json block_to_json(const Block& block);

/// Inverse of block_to_json. Rebuilds the merkle root from the transactions and
/// throws LedgerError (malformed) if the document's root or hash disagree.
Block block_from_json(const nlohmann::json& j);

} // namespace debtledger

#endif
