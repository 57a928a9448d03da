#include <debtledger/debt.hpp>

#include <algorithm>
#include <string>

namespace debtledger {

Transaction make_outstanding_debt(const Hash32& trigger, const Hash32& debt_origin,
                                  const LockingCondition& creditor, Amount amount,
                                  std::uint16_t loan_type)
{
    Transaction odt;
    odt.kind = TxKind::outstanding_debt;
    TxInput in;
    in.prev_field = trigger;
    in.output_index = kOutstandingDebtIndex;
    odt.inputs.push_back(in);
    odt.outputs.push_back({amount, creditor});
    odt.loan_type = loan_type;
    odt.debt_ref = debt_origin;
    return odt;
}

IssuedDebt build_issuance(const IssuanceRequest& req)
{
    if (req.debtor_outputs.empty()) throw LedgerError(Code::malformed, "issuance needs at least one debtor output");
    if (req.loan_type == 0) throw LedgerError(Code::malformed, "loan type must be non-zero");

    Transaction tx;
    tx.kind = TxKind::debt;
    tx.loan_type = req.loan_type;
    TxInput in;
    in.prev_field = Hash32::from(req.issuer.public_key());
    in.output_index = kDebtIndex;
    tx.inputs.push_back(in);
    for (const auto& d : req.debtor_outputs) {
        if (d.amount == 0) throw LedgerError(Code::malformed, "debtor output amount must be positive");
        tx.outputs.push_back({d.amount, {d.pubkey_hash}});
    }
    Amount total = output_total(tx);
    tx = sign_input(std::move(tx), 0, req.issuer);

    auto hash = tx_hash(tx);
    auto odt = make_outstanding_debt(hash, hash, {req.issuer.pubkey_hash()}, total, req.loan_type);
    return {std::move(tx), std::move(odt)};
}

IssuedDebt issue_debt(const LedgerState& state, const IssuanceRequest& req)
{
    if (!state.is_issuer(req.issuer.public_key()))
        throw LedgerError(Code::unauthorized_issuer, "key is not a permissioned debt issuer");
    return build_issuance(req);
}

namespace {

Amount coin_total(std::span<const Coin> coins)
{
    Amount total = 0;
    for (const auto& c : coins) {
        auto sum = checked_add(total, c.amount);
        if (!sum) throw LedgerError(Code::value_mismatch, "funding amounts overflow");
        total = *sum;
    }
    return total;
}

Transaction build_payment(const Hash32& debt_ref, std::uint16_t loan_type, const LockingCondition& payee,
                          const KeyPair& payer, Amount amount, std::span<const Coin> funding)
{
    if (amount == 0) throw LedgerError(Code::malformed, "payment amount must be positive");
    Amount available = coin_total(funding);
    if (available < amount)
        throw LedgerError(Code::insufficient_funding, "funding covers " + std::to_string(available) +
                                                          " of " + std::to_string(amount));

    Transaction tx;
    tx.kind = TxKind::normal;
    tx.loan_type = loan_type;
    tx.debt_ref = debt_ref;
    for (const auto& c : funding) {
        TxInput in;
        in.prev_field = c.point.tx_hash;
        in.output_index = static_cast<std::int32_t>(c.point.index);
        tx.inputs.push_back(in);
    }
    tx.outputs.push_back({amount, payee});
    if (available > amount) tx.outputs.push_back({available - amount, {payer.pubkey_hash()}});
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) tx = sign_input(std::move(tx), i, payer);
    return tx;
}

std::vector<Coin> resolve_funding(const LedgerState& state, const KeyPair& payer, std::span<const OutPoint> funding)
{
    std::vector<Coin> coins;
    auto owner = payer.pubkey_hash();
    for (const auto& point : funding) {
        const TxOutput* out = state.find_utxo(point);
        if (!out) throw LedgerError(Code::unknown_outpoint, "funding outpoint is not a live output");
        if (out->lock.pubkey_hash != owner)
            throw LedgerError(Code::bad_signature, "funding outpoint is not owned by the payer");
        coins.push_back({point, out->amount});
    }
    return coins;
}

const OutstandingDebtEntry& require_entry(const LedgerState& state, const Hash32& odt_hash)
{
    const OutstandingDebtEntry* entry = state.find_debt(odt_hash);
    if (!entry) throw LedgerError(Code::unknown_debt, "no such outstanding debt transaction");
    return *entry;
}

} // namespace

Transaction build_repay_full(const OutstandingDebtEntry& entry, const KeyPair& payer, std::span<const Coin> funding)
{
    return build_payment(entry.debt_origin, entry.loan_type, entry.creditor_lock, payer, entry.remaining, funding);
}

PartialRepayment build_repay_partial(const OutstandingDebtEntry& entry, const KeyPair& payer, Amount amount,
                                     std::span<const Coin> funding)
{
    if (amount == 0) throw LedgerError(Code::malformed, "repayment amount must be positive");
    if (amount >= entry.remaining)
        throw LedgerError(Code::value_mismatch,
                          "partial repayment must be below the remaining " + std::to_string(entry.remaining) +
                              "; use a full repayment");
    auto payment = build_payment(entry.debt_origin, entry.loan_type, entry.creditor_lock, payer, amount, funding);
    auto successor = make_outstanding_debt(tx_hash(payment), entry.debt_origin, entry.creditor_lock,
                                           entry.remaining - amount, entry.loan_type);
    return {std::move(payment), std::move(successor)};
}

Transaction repay_full(const LedgerState& state, const RepaymentRequest& req)
{
    const auto& entry = require_entry(state, req.odt_hash);
    if (req.amount != entry.remaining)
        throw LedgerError(Code::value_mismatch, "full repayment must equal the remaining debt");
    auto coins = resolve_funding(state, req.payer, req.funding);
    return build_repay_full(entry, req.payer, coins);
}

PartialRepayment repay_partial(const LedgerState& state, const RepaymentRequest& req)
{
    const auto& entry = require_entry(state, req.odt_hash);
    auto coins = resolve_funding(state, req.payer, req.funding);
    return build_repay_partial(entry, req.payer, req.amount, coins);
}

std::vector<Coin> select_coins(std::span<const Coin> available, Amount target)
{
    std::vector<Coin> sorted(available.begin(), available.end());
    std::sort(sorted.begin(), sorted.end(), [](const Coin& a, const Coin& b) {
        if (a.amount != b.amount) return a.amount > b.amount;
        return a.point < b.point;
    });

    std::vector<Coin> picked;
    Amount sum = 0;
    for (const auto& c : sorted) {
        if (sum >= target && !picked.empty()) break;
        picked.push_back(c);
        sum += c.amount;
    }
    if (sum < target || picked.empty())
        throw LedgerError(Code::insufficient_funding, "balance " + std::to_string(sum) + " is below " +
                                                          std::to_string(target));
    return picked;
}

std::vector<OutPoint> select_utxos(const LedgerState& state, const Hash32& owner, Amount target)
{
    std::vector<Coin> coins;
    for (const auto& [point, amount] : utxos_of(state, owner)) coins.push_back({point, amount});
    std::vector<OutPoint> out;
    for (const auto& c : select_coins(coins, target)) out.push_back(c.point);
    return out;
}

Transaction build_transfer(const KeyPair& from, std::span<const Coin> funding, const Hash32& to, Amount amount)
{
    return build_payment(Hash32{}, 0, {to}, from, amount, funding);
}

} // namespace debtledger
