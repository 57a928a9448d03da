#include <debtledger/debt.hpp>
#include <debtledger/workload.hpp>

#include <random>
#include <stdexcept>

namespace debtledger {

namespace {

KeyPair derive_key(std::mt19937_64& rng)
{
    Seed seed;
    for (std::size_t i = 0; i < seed.data.size(); i += 8) {
        std::uint64_t word = rng();
        for (std::size_t b = 0; b < 8; ++b) seed.data[i + b] = static_cast<std::uint8_t>(word >> (8 * b));
    }
    return KeyPair::from_seed(seed);
}

// Uniform in [lo, hi] by rejection, so the stream is portable across
// standard libraries (std::uniform_int_distribution is not).
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi)
{
    std::uint64_t span = hi - lo;
    if (span == ~std::uint64_t{0}) return rng();
    std::uint64_t n = span + 1;
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n) - 1;
    std::uint64_t x;
    do x = rng();
    while (x > limit);
    return lo + x % n;
}

class Generator {
public:
    Generator(const WorkloadParams& p, std::uint32_t validator_count) : p_(p), rng_(p.seed)
    {
        if (p.accounts == 0) throw std::invalid_argument("workload needs at least one account");
        if (p.allocation_min == 0 || p.allocation_min > p.allocation_max)
            throw std::invalid_argument("allocation range must be positive and ordered");
        for (std::uint32_t i = 0; i < validator_count; ++i) out_.genesis.validators.push_back(derive_key(rng_).public_key());
        for (std::size_t i = 0; i < p.issuers; ++i) {
            out_.issuers.push_back(derive_key(rng_));
            out_.genesis.issuers.push_back(out_.issuers.back().public_key());
        }
        for (std::size_t i = 0; i < p.accounts; ++i) {
            out_.accounts.push_back(derive_key(rng_));
            out_.genesis.allocations.push_back(
                {out_.accounts.back().pubkey_hash(), draw(rng_, p.allocation_min, p.allocation_max)});
        }
        state_ = genesis_state(out_.genesis);
    }

    GeneratedWorkload run()
    {
        while (out_.intents.size() < p_.tx_count) {
            auto roll = draw(rng_, 0, 99);
            std::optional<Intent> intent;
            if (roll < 25 && !out_.issuers.empty()) intent = issue();
            else if (roll < 50 && !state_.debts().empty()) intent = repay();
            else intent = transfer();
            if (!intent) continue;
            auto status = state_.validate(intent->tx);
            if (!status) {
                if (status.code == Code::replay) continue;
                throw std::logic_error("workload generator built an invalid transaction: " + status.log);
            }
            state_.apply(intent->tx);
            out_.intents.push_back(std::move(*intent));
        }
        return std::move(out_);
    }

private:
    std::vector<Coin> coins_of(const Hash32& owner) const
    {
        std::vector<Coin> coins;
        for (const auto& [point, amount] : utxos_of(state_, owner)) coins.push_back({point, amount});
        return coins;
    }

    // A random account holding at least `need`, or nullopt after a few tries.
    std::optional<std::size_t> funded_account(Amount need)
    {
        for (int attempt = 0; attempt < 16; ++attempt) {
            auto i = static_cast<std::size_t>(draw(rng_, 0, out_.accounts.size() - 1));
            if (balance_of(state_, out_.accounts[i].pubkey_hash()) >= need) return i;
        }
        return std::nullopt;
    }

    std::optional<Intent> transfer()
    {
        auto from = funded_account(1);
        if (!from) return std::nullopt;
        const auto& key = out_.accounts[*from];
        auto coins = coins_of(key.pubkey_hash());
        Amount balance = balance_of(state_, key.pubkey_hash());
        Amount amount = draw(rng_, 1, std::max<Amount>(1, balance / 2));
        auto to = static_cast<std::size_t>(draw(rng_, 0, out_.accounts.size() - 1));

        Intent in;
        in.kind = IntentKind::transfer;
        in.actor = *from;
        in.recipients.push_back({to, amount});
        in.tx = build_transfer(key, select_coins(coins, amount), out_.accounts[to].pubkey_hash(), amount);
        return in;
    }

    std::optional<Intent> issue()
    {
        auto issuer = static_cast<std::size_t>(draw(rng_, 0, out_.issuers.size() - 1));
        IssuanceRequest req{out_.issuers[issuer], {}, static_cast<std::uint16_t>(draw(rng_, 1, 3))};
        Intent in;
        in.kind = IntentKind::issue;
        in.actor = issuer;
        auto outputs = draw(rng_, 1, 3);
        for (std::uint64_t k = 0; k < outputs; ++k) {
            auto debtor = static_cast<std::size_t>(draw(rng_, 0, out_.accounts.size() - 1));
            Amount amount = draw(rng_, 1, 5'000);
            req.debtor_outputs.push_back({out_.accounts[debtor].pubkey_hash(), amount});
            in.recipients.push_back({debtor, amount});
        }
        in.tx = build_issuance(req).debt_tx;
        in.loan = tx_hash(in.tx);
        return in;
    }

    std::optional<Intent> repay()
    {
        auto pick = draw(rng_, 0, state_.debts().size() - 1);
        auto it = state_.debts().begin();
        std::advance(it, static_cast<std::ptrdiff_t>(pick));
        const OutstandingDebtEntry entry = it->second;

        bool full = entry.remaining == 1 || draw(rng_, 0, 2) == 0;
        Amount amount = full ? entry.remaining : draw(rng_, 1, entry.remaining - 1);
        auto payer = funded_account(amount);
        if (!payer) return std::nullopt;
        const auto& key = out_.accounts[*payer];
        auto coins = select_coins(coins_of(key.pubkey_hash()), amount);

        Intent in;
        in.kind = IntentKind::repay;
        in.actor = *payer;
        in.amount = amount;
        in.loan = entry.debt_origin;
        in.tx = full ? build_repay_full(entry, key, coins) : build_repay_partial(entry, key, amount, coins).payment_tx;
        return in;
    }

    const WorkloadParams& p_;
    std::mt19937_64 rng_;
    GeneratedWorkload out_;
    LedgerState state_;
};

} // namespace

std::vector<ClientCommand> GeneratedWorkload::commands(std::uint64_t first_tick, std::uint64_t spacing) const
{
    std::vector<ClientCommand> out;
    out.reserve(intents.size());
    std::uint64_t tick = first_tick;
    for (const auto& in : intents) {
        out.push_back({tick, canonical_encode(in.tx), std::nullopt});
        tick += spacing;
    }
    return out;
}

GeneratedWorkload generate_workload(const WorkloadParams& params, std::uint32_t validator_count)
{
    return Generator(params, validator_count).run();
}

} // namespace debtledger
