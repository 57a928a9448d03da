#include <debtledger/debt.hpp>
#include <debtledger/genesis.hpp>
#include <debtledger/merkle.hpp>
#include <debtledger/workload.hpp>

#include <benchmark/benchmark.h>

using namespace debtledger;

namespace {

KeyPair key(std::uint8_t n)
{
    Seed seed;
    seed.data.fill(n);
    return KeyPair::from_seed(seed);
}

std::vector<Coin> coins_of(const LedgerState& state, const Hash32& owner)
{
    std::vector<Coin> coins;
    for (const auto& [point, amount] : utxos_of(state, owner)) coins.push_back({point, amount});
    return coins;
}

struct Fixture {
    KeyPair alice = key(1);
    KeyPair bob = key(2);
    Genesis genesis;
    LedgerState state;
    Transaction transfer;

    Fixture()
    {
        genesis.validators = {key(200).public_key()};
        genesis.allocations = {{alice.pubkey_hash(), 1'000'000}};
        state = genesis_state(genesis);
        transfer = build_transfer(alice, coins_of(state, alice.pubkey_hash()), bob.pubkey_hash(), 10);
    }
};

void BM_EncodeAndHash(benchmark::State& st)
{
    Fixture f;
    for (auto _ : st) benchmark::DoNotOptimize(tx_hash(f.transfer));
}
BENCHMARK(BM_EncodeAndHash);

void BM_Decode(benchmark::State& st)
{
    Fixture f;
    auto bytes = canonical_encode(f.transfer);
    for (auto _ : st) benchmark::DoNotOptimize(canonical_decode(bytes));
}
BENCHMARK(BM_Decode);

void BM_Sign(benchmark::State& st)
{
    Fixture f;
    for (auto _ : st) benchmark::DoNotOptimize(sign_input(f.transfer, 0, f.alice));
}
BENCHMARK(BM_Sign);

void BM_ValidateTransfer(benchmark::State& st)
{
    Fixture f;
    const bool signatures = st.range(0) != 0;
    for (auto _ : st) benchmark::DoNotOptimize(f.state.validate(f.transfer, signatures));
}
BENCHMARK(BM_ValidateTransfer)->Arg(1)->Arg(0)->ArgName("verify_sig");

void BM_MerkleRoot(benchmark::State& st)
{
    std::vector<Hash32> leaves(static_cast<std::size_t>(st.range(0)));
    for (std::size_t i = 0; i < leaves.size(); ++i) leaves[i].data[0] = static_cast<std::uint8_t>(i);
    for (auto _ : st) benchmark::DoNotOptimize(merkle_root(leaves));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_MerkleRoot)->RangeMultiplier(8)->Range(8, 4096);

void BM_StateRoot(benchmark::State& st)
{
    WorkloadParams p;
    p.accounts = static_cast<std::size_t>(st.range(0));
    p.tx_count = 0;
    auto w = generate_workload(p);
    auto state = genesis_state(w.genesis);
    for (auto _ : st) benchmark::DoNotOptimize(state_root(state));
    st.counters["utxos"] = static_cast<double>(state.utxos().size());
}
BENCHMARK(BM_StateRoot)->Arg(50)->Arg(500)->Arg(5000);

void BM_ApplyWorkload(benchmark::State& st)
{
    auto w = generate_workload({7, 50, 5, 500});
    for (auto _ : st) {
        auto state = genesis_state(w.genesis);
        for (const auto& in : w.intents) state.apply(in.tx);
        benchmark::DoNotOptimize(state_root(state));
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(w.intents.size()));
}
BENCHMARK(BM_ApplyWorkload)->Unit(benchmark::kMillisecond);

void BM_PartialRepayment(benchmark::State& st)
{
    auto bank = key(50), debtor = key(1);
    Genesis g;
    g.validators = {key(200).public_key()};
    g.issuers = {bank.public_key()};
    auto state = genesis_state(g);
    auto issued = build_issuance({bank, {{debtor.pubkey_hash(), 1000}}, 1});
    state.apply(issued.debt_tx);
    auto entry = *state.find_debt(tx_hash(issued.odt));
    auto coins = select_coins(coins_of(state, debtor.pubkey_hash()), 10);
    for (auto _ : st) {
        auto partial = build_repay_partial(entry, debtor, 10, coins);
        benchmark::DoNotOptimize(state.validate(partial.payment_tx));
    }
}
BENCHMARK(BM_PartialRepayment);

} // namespace
