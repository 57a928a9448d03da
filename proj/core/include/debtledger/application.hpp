#ifndef DEBTLEDGER_APPLICATION_HPP
#define DEBTLEDGER_APPLICATION_HPP

#include <debtledger/block.hpp>
#include <debtledger/genesis.hpp>
#include <debtledger/ledger.hpp>
#include <debtledger/mempool.hpp>

#include <nlohmann/json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace debtledger {

struct AbciResponse {
    Code code = Code::ok;
    nlohmann::json payload;
    std::string log;

    bool ok() const { return code == Code::ok; }
    nlohmann::json to_json() const;
};

/// The application side of the consensus boundary.
///
/// check_tx validates against committed state plus the mempool and never
/// touches committed state. deliver_tx/commit run strictly in block order:
/// deliveries mutate a working copy, commit() publishes it as the new
/// immutable snapshot and appends the block to the durable log. Everything
/// delivered but not committed is lost by discard_uncommitted(), which is how
/// a crash between deliver and commit is modelled.
class Application {
public:
    explicit Application(Genesis genesis);

    /// Rebuilds from genesis by replaying a committed block log.
    static Application restore(Genesis genesis, const std::vector<Block>& log);

    AbciResponse check_tx(ByteView tx_bytes);
    AbciResponse check_tx(const Transaction& tx);

    /// Opens the next block; optional, proposer defaults to 0.
    void begin_block(std::uint32_t proposer);
    AbciResponse deliver_tx(ByteView tx_bytes);
    AbciResponse deliver_tx(const Transaction& tx);
    /// Finalizes the open block and returns the new state root.
    Hash32 commit();
    void discard_uncommitted();

    AbciResponse query(std::string_view path) const;

    /// begin_block + deliver_tx for each tx + commit. Returns the state root.
    /// Throws LedgerError if any transaction is rejected; state is unchanged then.
    Hash32 apply_block(const Block& block);

    /// Sequential validation of a proposed block against committed state.
    Status evaluate_block(const Block& block) const;

    /// Block for the next height from the mempool, without committing it.
    Block propose(std::uint32_t proposer, std::size_t max_txs) const;

    std::shared_ptr<const LedgerState> snapshot() const { return committed_; }
    const LedgerState& state() const { return *committed_; }
    std::uint64_t height() const { return committed_->height(); }
    Hash32 last_block_hash() const;
    Hash32 last_state_root() const { return last_root_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    const Genesis& genesis() const { return genesis_; }
    const Mempool& mempool() const { return mempool_; }

    /// Empties the mempool (volatile state lost in a crash).
    void clear_mempool();

private:
    void recheck_mempool();

    Genesis genesis_;
    std::shared_ptr<const LedgerState> committed_;
    Hash32 last_root_;
    std::vector<Block> blocks_;

    // Working state of the open block.
    std::optional<LedgerState> working_;
    std::optional<std::uint32_t> proposer_;
    std::vector<Transaction> delivered_;

    Mempool mempool_;
    // Committed state with the mempool applied; check_tx validates against it.
    LedgerState pending_;
};

} // namespace debtledger

#endif
