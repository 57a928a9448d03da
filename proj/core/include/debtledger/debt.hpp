#ifndef DEBTLEDGER_DEBT_HPP
#define DEBTLEDGER_DEBT_HPP

#include <debtledger/crypto.hpp>
#include <debtledger/ledger.hpp>
#include <debtledger/transaction.hpp>

#include <span>
#include <vector>

namespace debtledger {

struct DebtorOutput {
    Hash32 pubkey_hash;
    Amount amount = 0;
};

struct IssuanceRequest {
    KeyPair issuer;
    std::vector<DebtorOutput> debtor_outputs;
    std::uint16_t loan_type = 0;
};

struct IssuedDebt {
    Transaction debt_tx;
    Transaction odt;
};

/// A spendable output known to a wallet.
struct Coin {
    OutPoint point;
    Amount amount = 0;
};

struct RepaymentRequest {
    Hash32 odt_hash;
    KeyPair payer;
    Amount amount = 0;
    std::vector<OutPoint> funding;
};

struct PartialRepayment {
    Transaction payment_tx;
    Transaction new_odt;
};

/// The unmatched-input record that mirrors an obligation. `trigger` is the
/// committed transaction that created it: the debt transaction itself, or
/// the payment that left this remainder.
Transaction make_outstanding_debt(const Hash32& trigger, const Hash32& debt_origin,
                                  const LockingCondition& creditor, Amount amount,
                                  std::uint16_t loan_type);

/// Builds and signs the debt transaction and its outstanding-debt record.
/// Does not consult the issuer set; see issue_debt().
IssuedDebt build_issuance(const IssuanceRequest& req);

/// build_issuance() after checking the issuer against the state's issuer set.
IssuedDebt issue_debt(const LedgerState& state, const IssuanceRequest& req);

// Builders over an explicit entry and funding set, usable without a full
// ledger (the wallet works from query results).
Transaction build_repay_full(const OutstandingDebtEntry& entry, const KeyPair& payer,
                             std::span<const Coin> funding);
PartialRepayment build_repay_partial(const OutstandingDebtEntry& entry, const KeyPair& payer,
                                     Amount amount, std::span<const Coin> funding);

Transaction repay_full(const LedgerState& state, const RepaymentRequest& req);
PartialRepayment repay_partial(const LedgerState& state, const RepaymentRequest& req);

/// Greedy largest-first; ties go to the smaller outpoint.
std::vector<Coin> select_coins(std::span<const Coin> available, Amount target);
std::vector<OutPoint> select_utxos(const LedgerState& state, const Hash32& owner, Amount target);

/// Plain transfer with change back to the sender when the coins overshoot.
Transaction build_transfer(const KeyPair& from, std::span<const Coin> funding,
                           const Hash32& to, Amount amount);

} // namespace debtledger

#endif
