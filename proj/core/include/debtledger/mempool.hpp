#ifndef DEBTLEDGER_MEMPOOL_HPP
#define DEBTLEDGER_MEMPOOL_HPP

#include <debtledger/transaction.hpp>

#include <map>
#include <optional>
#include <unordered_set>
#include <vector>

namespace debtledger {

/// Validated, uncommitted transactions in arrival order. No two entries spend
/// the same outpoint.
class Mempool {
public:
    struct Entry {
        Hash32 hash;
        Transaction tx;
    };

    bool contains(const Hash32& hash) const;
    /// Hash of the pooled transaction already spending point, if any.
    std::optional<Hash32> spender_of(const OutPoint& point) const;

    /// Caller has validated tx; returns false on a duplicate or a conflict.
    bool add(Transaction tx);
    void remove(const Hash32& hash);
    void clear();

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::vector<Entry>& entries() const { return entries_; }

    /// Up to max_count transactions, parents before children.
    std::vector<Transaction> reap(std::size_t max_count) const;

private:
    std::vector<Entry> entries_;
    std::unordered_set<Hash32, FixedBytesHash> hashes_;
    std::map<OutPoint, Hash32> spent_;
};

/// Stable topological order: a transaction that spends another's output, or
/// repays a loan issued by another, follows it. Otherwise input order holds.
std::vector<Transaction> order_by_dependencies(std::vector<Transaction> txs);

} // namespace debtledger

#endif
