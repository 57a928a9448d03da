#ifndef DEBTLEDGER_TEST_ACCOUNT_ORACLE_HPP
#define DEBTLEDGER_TEST_ACCOUNT_ORACLE_HPP

#include <debtledger/workload.hpp>

#include <map>
#include <stdexcept>

namespace debtledger::test {

/// Plain per-owner balances and per-loan remainders, updated by direct
/// arithmetic from workload intents. Knows nothing about outputs or pools.
class AccountOracle {
public:
    explicit AccountOracle(const GeneratedWorkload& w) : w_(w)
    {
        for (const auto& a : w.genesis.allocations) {
            balances_[a.pubkey_hash] += a.amount;
            genesis_total_ += a.amount;
        }
    }

    void apply(const Intent& in)
    {
        switch (in.kind) {
        case IntentKind::transfer: {
            const auto& [to, amount] = in.recipients.at(0);
            debit(account(in.actor), amount);
            balances_[account(to)] += amount;
            break;
        }
        case IntentKind::issue: {
            Amount total = 0;
            for (const auto& [debtor, amount] : in.recipients) {
                balances_[account(debtor)] += amount;
                total += amount;
            }
            loans_[in.loan] = {w_.issuers.at(in.actor).pubkey_hash(), total};
            issued_ += total;
            break;
        }
        case IntentKind::repay: {
            auto it = loans_.find(in.loan);
            if (it == loans_.end() || it->second.remaining < in.amount)
                throw std::logic_error("oracle: repayment of an unknown or smaller loan");
            debit(account(in.actor), in.amount);
            balances_[it->second.creditor] += in.amount;
            it->second.remaining -= in.amount;
            if (it->second.remaining == 0) loans_.erase(it);
            repaid_ += in.amount;
            break;
        }
        }
    }

    Amount balance(const Hash32& owner) const
    {
        auto it = balances_.find(owner);
        return it == balances_.end() ? 0 : it->second;
    }

    /// debt origin -> remaining, for one creditor.
    std::map<Hash32, Amount> loans_of(const Hash32& creditor) const
    {
        std::map<Hash32, Amount> out;
        for (const auto& [origin, loan] : loans_)
            if (loan.creditor == creditor) out[origin] = loan.remaining;
        return out;
    }

    Amount genesis_total() const { return genesis_total_; }
    Amount issued() const { return issued_; }
    Amount repaid() const { return repaid_; }

private:
    struct Loan {
        Hash32 creditor;
        Amount remaining = 0;
    };

    Hash32 account(std::size_t i) const { return w_.accounts.at(i).pubkey_hash(); }

    void debit(const Hash32& owner, Amount amount)
    {
        auto& b = balances_[owner];
        if (b < amount) throw std::logic_error("oracle: overdraft");
        b -= amount;
    }

    const GeneratedWorkload& w_;
    std::map<Hash32, Amount> balances_;
    std::map<Hash32, Loan> loans_;
    Amount genesis_total_ = 0;
    Amount issued_ = 0;
    Amount repaid_ = 0;
};

} // namespace debtledger::test

#endif
