#include <debtledger/block.hpp>
#include <debtledger/crypto.hpp>
#include <debtledger/merkle.hpp>

namespace debtledger {

Hash32 transactions_root(const std::vector<Transaction>& txs)
{
    if (txs.empty()) return Hash32{};
    std::vector<Hash32> leaves;
    leaves.reserve(txs.size());
    for (const auto& tx : txs) leaves.push_back(tx_hash(tx));
    return merkle_root(leaves);
}

Block make_block(std::uint64_t height, const Hash32& prev_hash, std::uint32_t proposer,
                 std::vector<Transaction> txs)
{
    Block b;
    b.height = height;
    b.prev_hash = prev_hash;
    b.proposer = proposer;
    b.merkle_root = transactions_root(txs);
    b.txs = std::move(txs);
    return b;
}

Hash32 block_hash(const Block& block)
{
    Bytes header;
    header.reserve(8 + 32 + 4 + 32);
    append_le(header, block.height);
    append(header, block.prev_hash.view());
    append_le(header, block.proposer);
    append(header, block.merkle_root.view());
    return sha256(header);
}

bool merkle_consistent(const Block& block)
{
    return block.merkle_root == transactions_root(block.txs);
}

nlohmann::json block_to_json(const Block& block)
{
    nlohmann::json txs = nlohmann::json::array();
    for (const auto& tx : block.txs) {
        txs.push_back({{"hash", tx_hash(tx).hex()},
                       {"kind", kind_name(tx.kind)},
                       {"hex", to_hex(canonical_encode(tx))}});
    }
    return {{"height", block.height},
            {"hash", block_hash(block).hex()},
            {"prev_hash", block.prev_hash.hex()},
            {"proposer", block.proposer},
            {"merkle_root", block.merkle_root.hex()},
            {"txs", std::move(txs)}};
}

Block block_from_json(const nlohmann::json& j)
{
    try {
        std::vector<Transaction> txs;
        for (const auto& t : j.at("txs")) {
            auto raw = from_hex(t.at("hex").get<std::string>());
            if (!raw) throw LedgerError(Code::malformed, "block transaction is not hex");
            txs.push_back(canonical_decode(*raw));
        }
        auto prev = Hash32::from_hex(j.at("prev_hash").get<std::string>());
        if (!prev) throw LedgerError(Code::malformed, "block prev_hash is not a 32-byte hex string");
        Block b = make_block(j.at("height").get<std::uint64_t>(), *prev, j.at("proposer").get<std::uint32_t>(),
                             std::move(txs));
        if (j.contains("merkle_root") && j["merkle_root"].get<std::string>() != b.merkle_root.hex())
            throw LedgerError(Code::malformed, "block merkle_root does not match its transactions");
        if (j.contains("hash") && j["hash"].get<std::string>() != block_hash(b).hex())
            throw LedgerError(Code::malformed, "block hash does not match its header");
        return b;
    } catch (const nlohmann::json::exception& e) {
        throw LedgerError(Code::malformed, std::string("block JSON: ") + e.what());
    }
}

} // namespace debtledger
