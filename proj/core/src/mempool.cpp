#include <debtledger/mempool.hpp>

#include <algorithm>
#include <unordered_map>

namespace debtledger {

namespace {

OutPoint spent_point(const TxInput& in)
{
    return {in.prev_field, static_cast<std::uint32_t>(in.output_index)};
}

} // namespace

bool Mempool::contains(const Hash32& hash) const
{
    return hashes_.count(hash) != 0;
}

std::optional<Hash32> Mempool::spender_of(const OutPoint& point) const
{
    auto it = spent_.find(point);
    if (it == spent_.end()) return std::nullopt;
    return it->second;
}

bool Mempool::add(Transaction tx)
{
    auto hash = tx_hash(tx);
    if (contains(hash)) return false;
    if (tx.kind == TxKind::normal) {
        for (const auto& in : tx.inputs)
            if (spent_.count(spent_point(in))) return false;
        for (const auto& in : tx.inputs) spent_.emplace(spent_point(in), hash);
    }
    hashes_.insert(hash);
    entries_.push_back({hash, std::move(tx)});
    return true;
}

void Mempool::remove(const Hash32& hash)
{
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.hash == hash; });
    if (it == entries_.end()) return;
    if (it->tx.kind == TxKind::normal)
        for (const auto& in : it->tx.inputs) spent_.erase(spent_point(in));
    hashes_.erase(hash);
    entries_.erase(it);
}

void Mempool::clear()
{
    entries_.clear();
    hashes_.clear();
    spent_.clear();
}

std::vector<Transaction> Mempool::reap(std::size_t max_count) const
{
    std::vector<Transaction> txs;
    txs.reserve(entries_.size());
    for (const auto& e : entries_) txs.push_back(e.tx);
    txs = order_by_dependencies(std::move(txs));
    if (txs.size() > max_count) txs.resize(max_count);
    return txs;
}

std::vector<Transaction> order_by_dependencies(std::vector<Transaction> txs)
{
    const std::size_t n = txs.size();
    std::unordered_map<Hash32, std::size_t, FixedBytesHash> index;
    std::vector<Hash32> hashes(n);
    for (std::size_t i = 0; i < n; ++i) {
        hashes[i] = tx_hash(txs[i]);
        index.emplace(hashes[i], i);
    }

    std::vector<std::vector<std::size_t>> parents(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& tx = txs[i];
        if (tx.kind == TxKind::normal) {
            for (const auto& in : tx.inputs)
                if (auto it = index.find(in.prev_field); it != index.end() && it->second != i)
                    parents[i].push_back(it->second);
        }
        if (is_repayment(tx))
            if (auto it = index.find(tx.debt_ref); it != index.end() && it->second != i)
                parents[i].push_back(it->second);
    }

    std::vector<Transaction> ordered;
    ordered.reserve(n);
    std::vector<bool> placed(n, false);
    for (std::size_t round = 0; round < n; ++round) {
        std::size_t pick = n;
        for (std::size_t i = 0; i < n && pick == n; ++i) {
            if (placed[i]) continue;
            bool ready = std::all_of(parents[i].begin(), parents[i].end(), [&](std::size_t p) { return placed[p]; });
            if (ready) pick = i;
        }
        if (pick == n) break;
        placed[pick] = true;
        ordered.push_back(std::move(txs[pick]));
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!placed[i]) ordered.push_back(std::move(txs[i]));
    return ordered;
}

} // namespace debtledger
