#ifndef DEBTLEDGER_LEDGER_HPP
#define DEBTLEDGER_LEDGER_HPP

#include <debtledger/status.hpp>
#include <debtledger/transaction.hpp>

#include <map>
#include <set>
#include <unordered_set>
#include <vector>

namespace debtledger {

/// Debt pool record: an unpaid obligation owed to the creditor.
struct OutstandingDebtEntry {
    Hash32 odt_hash;
    LockingCondition creditor_lock;
    Amount remaining = 0;
    Hash32 debt_origin;
    std::uint16_t loan_type = 0;

    bool operator==(const OutstandingDebtEntry&) const = default;
};

using UtxoPool = std::map<OutPoint, TxOutput>;
using DebtPool = std::map<Hash32, OutstandingDebtEntry>;

/// Replicated application state. Mutated only through apply(); every
/// container is ordered so that hashing and query output are deterministic.
class LedgerState {
public:
    LedgerState() = default;
    explicit LedgerState(std::vector<PubKey> issuers);

    const UtxoPool& utxos() const { return utxos_; }
    const DebtPool& debts() const { return debts_; }
    const std::set<PubKey>& issuers() const { return issuers_; }
    std::uint64_t height() const { return height_; }

    bool is_issuer(const PubKey& key) const { return issuers_.count(key) != 0; }
    bool is_applied(const Hash32& hash) const { return applied_.count(hash) != 0; }
    std::size_t applied_count() const { return applied_.size(); }

    const TxOutput* find_utxo(const OutPoint& point) const;
    const OutstandingDebtEntry* find_debt(const Hash32& odt_hash) const;
    /// The live entry of a loan; a lineage has at most one at any time.
    const OutstandingDebtEntry* find_debt_by_origin(const Hash32& debt_origin) const;

    /// Structural and stateful validity of tx as the next transition.
    /// Signature checks may be skipped when re-validating a transaction that
    /// already passed them: outpoints are content-addressed, so a signature
    /// that verified once keeps verifying.
    Status validate(const Transaction& tx, bool verify_signatures = true) const;

    /// Applies a transaction that validate() accepted. Genesis coinbase
    /// transactions are admitted only through apply_genesis().
    void apply(const Transaction& tx);
    void apply_genesis(const Transaction& coinbase);

    void set_height(std::uint64_t height) { height_ = height; }

private:
    Status validate_normal(const Transaction& tx, bool verify_signatures) const;
    Status validate_debt(const Transaction& tx, bool verify_signatures) const;
    Status validate_repayment(const Transaction& tx) const;

    void insert_outputs(const Transaction& tx, const Hash32& hash);
    void insert_debt(const Transaction& odt, const Hash32& debt_origin);
    void erase_debt(const Hash32& odt_hash);

    UtxoPool utxos_;
    DebtPool debts_;
    std::map<Hash32, Hash32> origin_index_;
    std::set<PubKey> issuers_;
    std::uint64_t height_ = 0;
    std::unordered_set<Hash32, FixedBytesHash> applied_;
};

Status validate_against_state(const LedgerState& state, const Transaction& tx);

/// Pure transition. Throws LedgerError when tx does not validate.
LedgerState apply_transaction(LedgerState state, const Transaction& tx);

Amount balance_of(const LedgerState& state, const Hash32& owner);

/// Owned outputs of a key, ordered by outpoint.
std::vector<std::pair<OutPoint, Amount>> utxos_of(const LedgerState& state, const Hash32& owner);

Amount aggregate_debt(const LedgerState& state);

/// Entries owed to creditor, ordered by odt_hash.
std::vector<OutstandingDebtEntry> debts_of_creditor(const LedgerState& state, const Hash32& creditor);

/// Commitment to the UTXO pool, the debt pool and the height.
Hash32 state_root(const LedgerState& state);

/// Bytes state_root hashes; exposed for independent checking.
Bytes state_commitment_bytes(const LedgerState& state);

} // namespace debtledger

#endif
