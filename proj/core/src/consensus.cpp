#include <debtledger/consensus.hpp>

#include <stdexcept>

namespace debtledger {

Cluster::Cluster(Genesis genesis, std::uint32_t validators, std::size_t max_block_txs)
    : genesis_(std::move(genesis)), live_(validators, true), max_block_txs_(max_block_txs)
{
    if (validators == 0) throw std::invalid_argument("cluster needs at least one validator");
    nodes_.reserve(validators);
    for (std::uint32_t i = 0; i < validators; ++i) nodes_.emplace_back(genesis_);
}

std::size_t Cluster::live_count() const
{
    std::size_t n = 0;
    for (bool l : live_) n += l ? 1 : 0;
    return n;
}

std::vector<std::optional<AbciResponse>> Cluster::submit(const Transaction& tx)
{
    std::vector<std::optional<AbciResponse>> out(nodes_.size());
    for (std::uint32_t i = 0; i < size(); ++i)
        if (live_[i]) out[i] = nodes_[i].check_tx(tx);
    return out;
}

Block Cluster::propose_block(std::uint32_t node, std::uint64_t height) const
{
    if (node >= size() || !live_[node]) throw std::logic_error("proposer is not a live validator");
    if (proposer_for(height, 0, size()) != node) throw std::logic_error("validator is not the proposer for this height");
    if (nodes_[node].height() + 1 != height) throw std::logic_error("validator is not at the preceding height");
    return nodes_[node].propose(node, max_block_txs_);
}

VoteResult Cluster::vote_and_commit(const Block& block)
{
    VoteResult result;
    result.block_hash = block_hash(block);

    std::vector<std::uint32_t> prevoters;
    for (std::uint32_t i = 0; i < size(); ++i) {
        if (!live_[i]) continue;
        bool ok = block.proposer == proposer_for(block.height, 0, size()) && nodes_[i].evaluate_block(block).ok();
        if (ok) prevoters.push_back(i);
    }
    result.prevotes = prevoters.size();
    if (result.prevotes < quorum(size())) return result;

    // Every validator that saw the prevote quorum precommits.
    result.precommits = prevoters.size();
    if (result.precommits < quorum(size())) return result;

    for (std::uint32_t i = 0; i < size(); ++i)
        if (live_[i]) nodes_[i].apply_block(block);
    result.committed = true;
    return result;
}

std::optional<VoteResult> Cluster::step()
{
    std::uint64_t next = height() + 1;
    std::uint32_t proposer = proposer_for(next, 0, size());
    if (!live_[proposer] || nodes_[proposer].height() + 1 != next) return std::nullopt;
    return vote_and_commit(propose_block(proposer, next));
}

void Cluster::crash(std::uint32_t i)
{
    live_.at(i) = false;
    nodes_[i].discard_uncommitted();
    nodes_[i].clear_mempool();
}

void Cluster::restart(std::uint32_t i)
{
    auto log = nodes_.at(i).blocks();
    nodes_[i] = Application::restore(genesis_, log);
    live_[i] = true;

    std::uint32_t best = i;
    for (std::uint32_t j = 0; j < size(); ++j)
        if (live_[j] && nodes_[j].height() > nodes_[best].height()) best = j;
    const auto& source = nodes_[best].blocks();
    for (std::uint64_t h = nodes_[i].height() + 1; h < source.size(); ++h) nodes_[i].apply_block(source[h]);
}

std::uint64_t Cluster::height() const
{
    std::uint64_t h = 0;
    for (std::uint32_t i = 0; i < size(); ++i)
        if (live_[i]) h = std::max(h, nodes_[i].height());
    return h;
}

} // namespace debtledger
