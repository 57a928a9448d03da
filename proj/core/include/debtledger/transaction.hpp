#ifndef DEBTLEDGER_TRANSACTION_HPP
#define DEBTLEDGER_TRANSACTION_HPP

#include <debtledger/bytes.hpp>
#include <debtledger/status.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace debtledger {

class KeyPair;

/// Indivisible ledger units.
using Amount = std::uint64_t;

std::optional<Amount> checked_add(Amount a, Amount b);

enum class TxKind : std::uint8_t {
    normal = 0,
    coinbase = 1,
    debt = 2,
    outstanding_debt = 3,
};

std::string_view kind_name(TxKind kind);

// Input index sentinels for unmatched inputs.
inline constexpr std::int32_t kCoinbaseIndex = -1;
inline constexpr std::int32_t kDebtIndex = -2;
inline constexpr std::int32_t kOutstandingDebtIndex = -3;

inline constexpr std::uint16_t kTxVersion = 1;

struct LockingCondition {
    Hash32 pubkey_hash;

    auto operator<=>(const LockingCondition&) const = default;
};

struct TxOutput {
    Amount amount = 0;
    LockingCondition lock;

    bool operator==(const TxOutput&) const = default;
};

struct TxInput {
    // Spent transaction hash for normal inputs. A debt input stores the
    // creditor's public key here; an outstanding-debt input stores the hash of
    // the transaction that created the obligation.
    Hash32 prev_field;
    std::int32_t output_index = 0;
    PubKey unlock_pubkey;
    Signature unlock_sig;

    bool operator==(const TxInput&) const = default;
};

struct Transaction {
    std::uint16_t version = kTxVersion;
    TxKind kind = TxKind::normal;
    std::vector<TxInput> inputs;
    std::vector<TxOutput> outputs;
    std::uint32_t locktime = 0;
    std::uint16_t loan_type = 0;
    // Originating debt transaction for repayments and outstanding-debt records.
    Hash32 debt_ref;

    bool operator==(const Transaction&) const = default;
};

struct OutPoint {
    Hash32 tx_hash;
    std::uint32_t index = 0;

    auto operator<=>(const OutPoint&) const = default;
};

/// Largest list length the wire format accepts.
inline constexpr std::size_t kMaxListEntries = std::size_t{1} << 16;

Bytes canonical_encode(const Transaction& tx);
/// Inverse of canonical_encode. Rejects trailing bytes, unknown kind tags and
/// truncated input with LedgerError(Code::malformed).
Transaction canonical_decode(ByteView bytes);

Hash32 tx_hash(const Transaction& tx);

/// Digest every input signs: the transaction with all unlock fields zeroed.
Hash32 sighash(const Transaction& tx);

Transaction sign_input(Transaction tx, std::size_t input_index, const KeyPair& key);

bool verify_unlock(const LockingCondition& lock, const TxInput& input, const Hash32& digest);

/// Kind implied by the input sentinels. Throws LedgerError(Code::malformed)
/// for mixed sentinels, an empty input list, or disagreement with tx.kind.
TxKind classify(const Transaction& tx);

/// Everything that can be checked without ledger state.
Status check_structure(const Transaction& tx);

Amount output_total(const Transaction& tx);

/// A normal transaction carrying a debt reference is a repayment.
inline bool is_repayment(const Transaction& tx)
{
    return tx.kind == TxKind::normal && !tx.debt_ref.is_zero();
}

} // namespace debtledger

#endif
