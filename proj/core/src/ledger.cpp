#include <debtledger/crypto.hpp>
#include <debtledger/debt.hpp>
#include <debtledger/ledger.hpp>

#include <cassert>
#include <set>

namespace debtledger {

LedgerState::LedgerState(std::vector<PubKey> issuers) : issuers_(issuers.begin(), issuers.end()) {}

const TxOutput* LedgerState::find_utxo(const OutPoint& point) const
{
    auto it = utxos_.find(point);
    return it == utxos_.end() ? nullptr : &it->second;
}

const OutstandingDebtEntry* LedgerState::find_debt(const Hash32& odt_hash) const
{
    auto it = debts_.find(odt_hash);
    return it == debts_.end() ? nullptr : &it->second;
}

const OutstandingDebtEntry* LedgerState::find_debt_by_origin(const Hash32& debt_origin) const
{
    auto it = origin_index_.find(debt_origin);
    return it == origin_index_.end() ? nullptr : find_debt(it->second);
}

Status LedgerState::validate(const Transaction& tx, bool verify_signatures) const
{
    if (auto s = check_structure(tx); !s) return s;

    auto hash = tx_hash(tx);
    if (is_applied(hash)) return Status::reject(Code::replay, "transaction already committed");

    switch (tx.kind) {
    case TxKind::coinbase:
        return Status::reject(Code::malformed, "coinbase transactions are only valid in genesis");
    case TxKind::outstanding_debt:
        return Status::reject(Code::malformed, "outstanding debt records are derived, not submitted");
    case TxKind::debt:
        return validate_debt(tx, verify_signatures);
    case TxKind::normal:
        return validate_normal(tx, verify_signatures);
    }
    return Status::reject(Code::malformed, "unknown transaction kind");
}

Status LedgerState::validate_debt(const Transaction& tx, bool verify_signatures) const
{
    const auto& in = tx.inputs.front();
    if (!is_issuer(in.unlock_pubkey))
        return Status::reject(Code::unauthorized_issuer, "key is not a permissioned debt issuer");
    if (verify_signatures && !verify_signature(in.unlock_pubkey, sighash(tx).view(), in.unlock_sig))
        return Status::reject(Code::bad_signature, "issuer signature does not verify");
    return Status::success();
}

Status LedgerState::validate_normal(const Transaction& tx, bool verify_signatures) const
{
    std::set<OutPoint> seen;
    for (const auto& in : tx.inputs) {
        OutPoint point{in.prev_field, static_cast<std::uint32_t>(in.output_index)};
        if (!seen.insert(point).second)
            return Status::reject(Code::value_mismatch, "transaction spends the same outpoint twice");
    }

    Hash32 digest;
    if (verify_signatures) digest = sighash(tx);
    Amount in_total = 0;
    for (const auto& in : tx.inputs) {
        const TxOutput* prev = find_utxo({in.prev_field, static_cast<std::uint32_t>(in.output_index)});
        if (!prev) return Status::reject(Code::unknown_outpoint, "input references no live output");
        if (verify_signatures && !verify_unlock(prev->lock, in, digest))
            return Status::reject(Code::bad_signature, "unlocking proof does not satisfy the output lock");
        auto sum = checked_add(in_total, prev->amount);
        if (!sum) return Status::reject(Code::value_mismatch, "input amounts overflow");
        in_total = *sum;
    }
    if (in_total != output_total(tx))
        return Status::reject(Code::value_mismatch, "inputs and outputs do not balance");

    if (is_repayment(tx)) return validate_repayment(tx);
    return Status::success();
}

Status LedgerState::validate_repayment(const Transaction& tx) const
{
    const OutstandingDebtEntry* entry = find_debt_by_origin(tx.debt_ref);
    if (!entry) return Status::reject(Code::unknown_debt, "no outstanding debt for this loan");
    const auto& payment = tx.outputs.front();
    if (payment.lock != entry->creditor_lock)
        return Status::reject(Code::value_mismatch, "repayment output does not pay the creditor");
    if (payment.amount > entry->remaining)
        return Status::reject(Code::value_mismatch, "repayment exceeds the remaining debt");
    return Status::success();
}

void LedgerState::insert_outputs(const Transaction& tx, const Hash32& hash)
{
    for (std::uint32_t i = 0; i < tx.outputs.size(); ++i) utxos_.emplace(OutPoint{hash, i}, tx.outputs[i]);
}

void LedgerState::insert_debt(const Transaction& odt, const Hash32& debt_origin)
{
    OutstandingDebtEntry entry{tx_hash(odt), odt.outputs.front().lock, odt.outputs.front().amount,
                               debt_origin, odt.loan_type};
    origin_index_[debt_origin] = entry.odt_hash;
    debts_.emplace(entry.odt_hash, entry);
}

void LedgerState::erase_debt(const Hash32& odt_hash)
{
    auto it = debts_.find(odt_hash);
    assert(it != debts_.end());
    origin_index_.erase(it->second.debt_origin);
    debts_.erase(it);
}

void LedgerState::apply(const Transaction& tx)
{
    auto hash = tx_hash(tx);
    switch (tx.kind) {
    case TxKind::debt: {
        insert_outputs(tx, hash);
        LockingCondition creditor{pubkey_hash(tx.inputs.front().unlock_pubkey)};
        insert_debt(make_outstanding_debt(hash, hash, creditor, output_total(tx), tx.loan_type), hash);
        break;
    }
    case TxKind::normal: {
        for (const auto& in : tx.inputs)
            utxos_.erase(OutPoint{in.prev_field, static_cast<std::uint32_t>(in.output_index)});
        insert_outputs(tx, hash);
        if (is_repayment(tx)) {
            const OutstandingDebtEntry entry = *find_debt_by_origin(tx.debt_ref);
            Amount paid = tx.outputs.front().amount;
            erase_debt(entry.odt_hash);
            if (paid < entry.remaining) {
                insert_debt(make_outstanding_debt(hash, entry.debt_origin, entry.creditor_lock,
                                                  entry.remaining - paid, entry.loan_type),
                            entry.debt_origin);
            }
        }
        break;
    }
    case TxKind::coinbase:
    case TxKind::outstanding_debt:
        throw LedgerError(Code::malformed, "transaction kind cannot be applied");
    }
    applied_.insert(hash);
}

void LedgerState::apply_genesis(const Transaction& coinbase)
{
    if (auto s = check_structure(coinbase); !s) throw LedgerError(s.code, s.log);
    if (coinbase.kind != TxKind::coinbase) throw LedgerError(Code::malformed, "genesis expects a coinbase transaction");
    auto hash = tx_hash(coinbase);
    insert_outputs(coinbase, hash);
    applied_.insert(hash);
}

Status validate_against_state(const LedgerState& state, const Transaction& tx)
{
    return state.validate(tx);
}

LedgerState apply_transaction(LedgerState state, const Transaction& tx)
{
    if (auto s = state.validate(tx); !s) throw LedgerError(s.code, s.log);
    state.apply(tx);
    return state;
}

Amount balance_of(const LedgerState& state, const Hash32& owner)
{
    Amount total = 0;
    for (const auto& [point, out] : state.utxos())
        if (out.lock.pubkey_hash == owner) total += out.amount;
    return total;
}

std::vector<std::pair<OutPoint, Amount>> utxos_of(const LedgerState& state, const Hash32& owner)
{
    std::vector<std::pair<OutPoint, Amount>> out;
    for (const auto& [point, o] : state.utxos())
        if (o.lock.pubkey_hash == owner) out.emplace_back(point, o.amount);
    return out;
}

Amount aggregate_debt(const LedgerState& state)
{
    Amount total = 0;
    for (const auto& [hash, entry] : state.debts()) total += entry.remaining;
    return total;
}

std::vector<OutstandingDebtEntry> debts_of_creditor(const LedgerState& state, const Hash32& creditor)
{
    std::vector<OutstandingDebtEntry> out;
    for (const auto& [hash, entry] : state.debts())
        if (entry.creditor_lock.pubkey_hash == creditor) out.push_back(entry);
    return out;
}

Bytes state_commitment_bytes(const LedgerState& state)
{
    Bytes out;
    out.reserve(8 + state.utxos().size() * 76 + state.debts().size() * 106 + 8);
    append_le(out, static_cast<std::uint32_t>(state.utxos().size()));
    for (const auto& [point, o] : state.utxos()) {
        append(out, point.tx_hash.view());
        append_le(out, point.index);
        append_le(out, o.amount);
        append(out, o.lock.pubkey_hash.view());
    }
    append_le(out, static_cast<std::uint32_t>(state.debts().size()));
    for (const auto& [hash, entry] : state.debts()) {
        append(out, entry.odt_hash.view());
        append(out, entry.creditor_lock.pubkey_hash.view());
        append_le(out, entry.remaining);
        append(out, entry.debt_origin.view());
        append_le(out, entry.loan_type);
    }
    append_le(out, state.height());
    return out;
}

Hash32 state_root(const LedgerState& state)
{
    return sha256(state_commitment_bytes(state));
}

} // namespace debtledger
