#ifndef DEBTLEDGER_WORKLOAD_HPP
#define DEBTLEDGER_WORKLOAD_HPP

#include <debtledger/crypto.hpp>
#include <debtledger/genesis.hpp>
#include <debtledger/simulation.hpp>

#include <cstdint>
#include <utility>
#include <vector>

namespace debtledger {

struct WorkloadParams {
    std::uint64_t seed = 1;
    std::size_t accounts = 50;
    std::size_t issuers = 5;
    std::size_t tx_count = 1000;
    // Genesis allocations are drawn uniformly from [min, max].
    Amount allocation_min = 10'000;
    Amount allocation_max = 100'000;
};

enum class IntentKind { transfer, issue, repay };

/// What a generated transaction means in account terms, so a test can track
/// balances without looking at outputs.
struct Intent {
    IntentKind kind = IntentKind::transfer;
    // Paying account for transfer and repay; issuer ordinal for issue.
    std::size_t actor = 0;
    // transfer: one (account, amount); issue: the debtor outputs.
    std::vector<std::pair<std::size_t, Amount>> recipients;
    // repay: amount paid and the loan's debt transaction hash.
    Amount amount = 0;
    Hash32 loan;
    Transaction tx;
};

struct GeneratedWorkload {
    Genesis genesis;
    std::vector<KeyPair> accounts;
    std::vector<KeyPair> issuers;
    // Valid when applied in order to the genesis state.
    std::vector<Intent> intents;

    /// One command per intent, the first at first_tick and then every
    /// spacing ticks, delivered to all validators.
    std::vector<ClientCommand> commands(std::uint64_t first_tick, std::uint64_t spacing) const;
};

/// Deterministic in params and validator keys: keys come from the seed, and
/// each transaction is checked against a running copy of the ledger.
GeneratedWorkload generate_workload(const WorkloadParams& params, std::uint32_t validator_count = 4);

} // namespace debtledger

#endif
