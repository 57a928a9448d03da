#ifndef DEBTLEDGER_CONSENSUS_HPP
#define DEBTLEDGER_CONSENSUS_HPP

#include <debtledger/application.hpp>

#include <vector>

namespace debtledger {

/// Round-robin leader: rotates with every height and every failed round.
inline std::uint32_t proposer_for(std::uint64_t height, std::uint32_t round, std::uint32_t validators)
{
    return static_cast<std::uint32_t>((height + round) % validators);
}

/// Smallest vote count strictly above two thirds of the validator set.
inline std::size_t quorum(std::uint32_t validators)
{
    return 2 * static_cast<std::size_t>(validators) / 3 + 1;
}

struct VoteResult {
    bool committed = false;
    std::size_t prevotes = 0;
    std::size_t precommits = 0;
    Hash32 block_hash;
};

/// Lock-step replica set: every message is delivered instantly and in
/// order, so one call runs a full prevote/precommit exchange. The seeded
/// asynchronous network lives in simulation.hpp.
class Cluster {
public:
    Cluster(Genesis genesis, std::uint32_t validators, std::size_t max_block_txs = 1000);

    std::uint32_t size() const { return static_cast<std::uint32_t>(nodes_.size()); }
    const Application& node(std::uint32_t i) const { return nodes_.at(i); }
    bool is_live(std::uint32_t i) const { return live_.at(i); }
    std::size_t live_count() const;

    /// check_tx on every live node; one response per node (dead nodes get nullopt).
    std::vector<std::optional<AbciResponse>> submit(const Transaction& tx);

    /// Throws std::logic_error unless node is live, at height - 1, and the
    /// round-0 proposer for height.
    Block propose_block(std::uint32_t node, std::uint64_t height) const;

    /// Live validators prevote the block if it is well-formed, comes from the
    /// right proposer and every transaction validates in order against their
    /// own state; otherwise they prevote nil. With a prevote quorum they
    /// precommit, and with a precommit quorum every live node applies it.
    VoteResult vote_and_commit(const Block& block);

    /// Proposes from the current proposer and votes. Returns nullopt when the
    /// proposer is down.
    std::optional<VoteResult> step();

    /// Drops volatile state (mempool, uncommitted work); keeps the block log.
    void crash(std::uint32_t i);
    /// Replays the node's own log from genesis, then fetches missing blocks
    /// from the most advanced live peer.
    void restart(std::uint32_t i);

    /// Highest committed height on any live node.
    std::uint64_t height() const;

private:
    Genesis genesis_;
    std::vector<Application> nodes_;
    std::vector<bool> live_;
    std::size_t max_block_txs_;
};

} // namespace debtledger

#endif
