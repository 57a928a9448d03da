#include <debtledger/consensus.hpp>
#include <debtledger/simulation.hpp>
#include <debtledger/workload.hpp>

#include <benchmark/benchmark.h>

using namespace debtledger;

namespace {

void BM_ClusterBlocks(benchmark::State& st)
{
    auto w = generate_workload({9, 50, 5, 400});
    const auto batch = static_cast<std::size_t>(st.range(0));
    for (auto _ : st) {
        Cluster cluster(w.genesis, 4, batch);
        for (std::size_t i = 0; i < w.intents.size(); ++i) {
            cluster.submit(w.intents[i].tx);
            if ((i + 1) % batch == 0) cluster.step();
        }
        while (cluster.node(0).mempool().size() > 0) cluster.step();
        benchmark::DoNotOptimize(cluster.height());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(w.intents.size()));
}
BENCHMARK(BM_ClusterBlocks)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Simulation(benchmark::State& st)
{
    auto w = generate_workload({5, 20, 3, 200});
    SimConfig cfg;
    cfg.seed = 5;
    cfg.genesis = w.genesis;
    cfg.delay_max = 10;
    cfg.drop_probability = st.range(1) / 100.0;
    cfg.max_height = static_cast<std::uint64_t>(st.range(0));
    auto cmds = w.commands(1, 5);
    for (auto _ : st) {
        auto trace = run_simulation(cfg, cmds);
        benchmark::DoNotOptimize(trace.end_tick);
        st.counters["ticks"] = static_cast<double>(trace.end_tick);
    }
}
BENCHMARK(BM_Simulation)->Args({50, 0})->Args({200, 0})->Args({200, 5})->Unit(benchmark::kMillisecond);

} // namespace
