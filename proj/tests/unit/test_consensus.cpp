#include "fixtures.hpp"

#include <debtledger/consensus.hpp>
#include <debtledger/simulation.hpp>
#include <debtledger/workload.hpp>

#include <doctest.h>

using namespace debtledger;
using namespace debtledger::test;

namespace {

struct Net {
    KeyPair alice = key(1);
    KeyPair bob = key(2);
    KeyPair bank = key(50);
    Genesis genesis = make_genesis({bank.public_key()}, {{alice.pubkey_hash(), 1000}, {bob.pubkey_hash(), 500}});
    Cluster cluster{genesis, 4};

    Transaction transfer(const KeyPair& from, const KeyPair& to, Amount amount)
    {
        return pay(cluster.node(0).state(), from, to.pubkey_hash(), amount);
    }
};

SimConfig small_config(std::uint64_t seed)
{
    auto w = generate_workload({seed, 10, 2, 40}, 4);
    SimConfig cfg;
    cfg.seed = seed;
    cfg.genesis = w.genesis;
    cfg.max_height = 20;
    cfg.block_interval = 4;
    return cfg;
}

} // namespace

TEST_CASE("[consensus-harness] proposer rotation and quorum arithmetic")
{
    CHECK(proposer_for(5, 0, 4) == 1);
    CHECK(proposer_for(5, 1, 4) == 2);
    CHECK(proposer_for(4, 0, 4) == 0);
    CHECK(quorum(4) == 3);
    CHECK(quorum(3) == 3);
    CHECK(quorum(1) == 1);
    CHECK(quorum(7) == 5);
    CHECK(quorum(6) == 5);
}

TEST_CASE("[consensus-harness] empty mempool proposes an empty block")
{
    Net n;
    auto block = n.cluster.propose_block(1, 1);
    CHECK(block.txs.empty());
    CHECK(block.merkle_root.is_zero());
    CHECK(block.height == 1);
    CHECK(block.prev_hash == block_hash(genesis_block(n.genesis)));
    CHECK_THROWS_AS(n.cluster.propose_block(0, 1), std::logic_error);
    CHECK_THROWS_AS(n.cluster.propose_block(2, 2), std::logic_error);
}

TEST_CASE("[consensus-harness] a repayment is ordered after the debt it repays")
{
    Net n;
    auto issued = build_issuance({n.bank, {{n.alice.pubkey_hash(), 100}}, 1});
    auto debt_hash = tx_hash(issued.debt_tx);
    OutstandingDebtEntry entry{tx_hash(issued.odt), {n.bank.pubkey_hash()}, 100, debt_hash, 1};
    // Funded by the output the debt transaction itself mints.
    auto repay = build_repay_full(entry, n.alice, std::vector<Coin>{{{debt_hash, 0}, 100}});

    auto ordered = order_by_dependencies({repay, issued.debt_tx});
    REQUIRE(ordered.size() == 2);
    CHECK(ordered[0] == issued.debt_tx);
    CHECK(ordered[1] == repay);

    for (const auto& r : n.cluster.submit(issued.debt_tx)) CHECK(r->ok());
    for (const auto& r : n.cluster.submit(repay)) CHECK(r->ok());
    auto block = n.cluster.propose_block(1, 1);
    REQUIRE(block.txs.size() == 2);
    CHECK(block.txs[0] == issued.debt_tx);
    auto result = n.cluster.vote_and_commit(block);
    CHECK(result.committed);
    CHECK(aggregate_debt(n.cluster.node(2).state()) == 0);
}

TEST_CASE("[consensus-harness] spending chains inside one block are ordered parent first")
{
    Net n;
    auto first = n.transfer(n.alice, n.bob, 100);
    auto child = build_transfer(n.bob, std::vector<Coin>{{{tx_hash(first), 0}, 100}}, n.alice.pubkey_hash(), 60);
    auto ordered = order_by_dependencies({child, first});
    CHECK(ordered[0] == first);
    CHECK(ordered[1] == child);
}

TEST_CASE("[consensus-harness] quorum outcomes under crashes")
{
    SUBCASE("all live")
    {
        Net n;
        n.cluster.submit(n.transfer(n.alice, n.bob, 10));
        auto r = n.cluster.step();
        REQUIRE(r);
        CHECK(r->committed);
        CHECK(r->precommits == 4);
        for (std::uint32_t i = 0; i < 4; ++i) CHECK(n.cluster.node(i).height() == 1);
    }
    SUBCASE("one crashed")
    {
        Net n;
        n.cluster.crash(3);
        n.cluster.submit(n.transfer(n.alice, n.bob, 10));
        auto r = n.cluster.step();
        REQUIRE(r);
        CHECK(r->committed);
        CHECK(r->precommits == 3);
        CHECK(n.cluster.node(3).height() == 0);
    }
    SUBCASE("two crashed")
    {
        Net n;
        n.cluster.crash(2);
        n.cluster.crash(3);
        n.cluster.submit(n.transfer(n.alice, n.bob, 10));
        auto r = n.cluster.step();
        REQUIRE(r);
        CHECK_FALSE(r->committed);
        CHECK(r->prevotes == 2);
        CHECK(n.cluster.height() == 0);
        CHECK(state_root(n.cluster.node(0).state()) == state_root(n.cluster.node(1).state()));
    }
}

TEST_CASE("[consensus-harness] a block with an invalid transaction is voted down")
{
    Net n;
    auto coins = coins_of(n.cluster.node(0).state(), n.bob.pubkey_hash());
    auto a = build_transfer(n.bob, coins, n.alice.pubkey_hash(), 500);
    auto b = build_transfer(n.bob, coins, key(9).pubkey_hash(), 500);
    auto block = make_block(1, n.cluster.node(1).last_block_hash(), 1, {a, b});
    auto r = n.cluster.vote_and_commit(block);
    CHECK_FALSE(r.committed);
    CHECK(r.prevotes == 0);
    CHECK(n.cluster.height() == 0);

    auto wrong_proposer = make_block(1, n.cluster.node(1).last_block_hash(), 2, {a});
    CHECK_FALSE(n.cluster.vote_and_commit(wrong_proposer).committed);
}

TEST_CASE("[consensus-harness] a restarted validator catches up from its log and peers")
{
    Net n;
    n.cluster.submit(n.transfer(n.alice, n.bob, 10));
    REQUIRE(n.cluster.step()->committed);
    n.cluster.crash(2);
    for (int i = 0; i < 3; ++i) {
        n.cluster.submit(n.transfer(n.alice, n.bob, 5 + i));
        auto r = n.cluster.step();
        if (!r) continue; // validator 2's turn while it is down
        CHECK(r->committed);
    }
    CHECK(n.cluster.node(2).height() == 1);
    n.cluster.restart(2);
    CHECK(n.cluster.node(2).height() == n.cluster.height());
    CHECK(n.cluster.node(2).last_state_root() == n.cluster.node(0).last_state_root());
}

TEST_CASE("[consensus-harness] simulation without faults agrees at every height")
{
    auto w = generate_workload({3, 12, 2, 120}, 4);
    SimConfig cfg;
    cfg.seed = 3;
    cfg.genesis = w.genesis;
    cfg.max_height = 100;
    cfg.block_interval = 2;
    auto trace = run_simulation(cfg, w.commands(1, 1));
    CHECK(verify_replication(trace));
    CHECK(trace.commits.size() == 400);
    for (const auto& f : trace.finals) {
        CHECK(f.height == 100);
        CHECK(f.state_root == trace.finals[0].state_root);
    }
    std::size_t committed = 0;
    for (const auto& b : trace.chain) committed += b.height ? b.txs.size() : 0;
    CHECK(committed == 120);
}

TEST_CASE("[consensus-harness] identical inputs give identical traces")
{
    auto w = generate_workload({4, 10, 2, 60}, 4);
    SimConfig cfg;
    cfg.seed = 99;
    cfg.genesis = w.genesis;
    cfg.max_height = 30;
    cfg.delay_min = 1;
    cfg.delay_max = 6;
    cfg.drop_probability = 0.1;
    auto cmds = w.commands(1, 3);
    auto a = run_simulation(cfg, cmds);
    auto b = run_simulation(cfg, cmds);
    CHECK(a.to_jsonl() == b.to_jsonl());
    CHECK(a.commits == b.commits);
    CHECK(a.messages_dropped == b.messages_dropped);
    cfg.seed = 100;
    CHECK(run_simulation(cfg, cmds).to_jsonl() != a.to_jsonl());
}

TEST_CASE("[consensus-harness] crashed validator recovers to the replayed root")
{
    auto w = generate_workload({5, 10, 2, 80}, 4);
    SimConfig cfg;
    cfg.seed = 5;
    cfg.genesis = w.genesis;
    cfg.max_height = 60;
    cfg.block_interval = 10;
    cfg.crash_schedule = {{2, 50, 500}};
    auto trace = run_simulation(cfg, w.commands(1, 4));
    CHECK(verify_replication(trace));
    REQUIRE(trace.finals.size() == 4);
    CHECK(trace.finals[2].live);
    CHECK(trace.finals[2].height == trace.finals[0].height);
    CHECK(trace.finals[2].state_root == trace.finals[0].state_root);
    bool recommitted_late = false;
    for (const auto& c : trace.commits) recommitted_late |= c.validator == 2 && c.tick >= 500;
    CHECK(recommitted_late);

    // Independent single-node replay of the committed log.
    auto replay = genesis_state(cfg.genesis);
    for (std::size_t h = 1; h < trace.chain.size(); ++h) {
        for (const auto& tx : trace.chain[h].txs) commit_tx(replay, tx);
        replay.set_height(h);
    }
    CHECK(state_root(replay) == trace.finals[2].state_root);
}

TEST_CASE("[consensus-harness] two of four crashed halts commits without divergence")
{
    auto cfg = small_config(6);
    cfg.crash_schedule = {{0, 30, std::nullopt}, {1, 30, std::nullopt}};
    cfg.max_ticks = 3000;
    auto trace = run_simulation(cfg, {});
    CHECK(verify_replication(trace));
    std::uint64_t before = 0, after = 0;
    for (const auto& c : trace.commits) (c.tick <= 30 ? before : after) += 1;
    CHECK(before > 0);
    // Commits after the crash can only be stragglers finishing a height the others already had.
    std::uint64_t max_height_at_crash = 0;
    for (const auto& c : trace.commits)
        if (c.tick <= 30) max_height_at_crash = std::max(max_height_at_crash, c.height);
    for (const auto& c : trace.commits)
        if (c.tick > 30) CHECK(c.height <= max_height_at_crash);
    CHECK(trace.finals[2].state_root == trace.finals[3].state_root);
}

TEST_CASE("[consensus-harness] fault-free liveness bound")
{
    auto w = generate_workload({8, 10, 2, 30}, 4);
    SimConfig cfg;
    cfg.seed = 8;
    cfg.genesis = w.genesis;
    cfg.block_interval = 10;
    cfg.max_height = 40;
    auto cmds = w.commands(5, 7);
    auto trace = run_simulation(cfg, cmds);
    std::map<Hash32, std::uint64_t> included_at;
    for (const auto& b : trace.chain)
        for (const auto& tx : b.txs) included_at[tx_hash(tx)] = b.height;
    std::map<std::uint64_t, std::uint64_t> first_commit_tick;
    for (const auto& c : trace.commits)
        if (!first_commit_tick.count(c.height)) first_commit_tick[c.height] = c.tick;
    for (const auto& cmd : cmds) {
        auto h = tx_hash(canonical_decode(cmd.tx));
        REQUIRE(included_at.count(h));
        CHECK(first_commit_tick.at(included_at.at(h)) - cmd.tick <= cfg.validator_count * cfg.block_interval);
    }
}

TEST_CASE("[consensus-harness] replication checker detects divergence")
{
    auto trace = run_simulation(small_config(7), {});
    REQUIRE(verify_replication(trace));

    auto bad_root = trace;
    bad_root.commits[5].state_root.data[0] ^= 1;
    CHECK_FALSE(verify_replication(bad_root));

    auto bad_block = trace;
    bad_block.commits[6].block_hash.data[31] ^= 1;
    CHECK_FALSE(verify_replication(bad_block));

    auto bad_final = trace;
    bad_final.finals[1].state_root.data[2] ^= 1;
    CHECK_FALSE(verify_replication(bad_final));
}

TEST_CASE("[consensus-harness] seeds and crash schedules within quorum all replicate")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto cfg = small_config(seed);
        cfg.delay_max = 5;
        cfg.drop_probability = 0.05;
        cfg.crash_schedule = {{static_cast<std::uint32_t>(seed % 4), 20 + seed * 7, 150 + seed * 11}};
        auto w = generate_workload({seed, 10, 2, 40}, 4);
        auto trace = run_simulation(cfg, w.commands(1, 3));
        CAPTURE(seed);
        CHECK(verify_replication(trace));
        for (const auto& f : trace.finals) CHECK(f.height == cfg.max_height);
    }
}

TEST_CASE("[consensus-harness] configuration and workload files")
{
    auto cfg = small_config(1);
    cfg.crash_schedule = {{1, 10, 20}, {2, 5, std::nullopt}};
    cfg.delay_min = 2;
    cfg.delay_max = 9;
    auto again = SimConfig::from_json(cfg.to_json());
    CHECK(again.to_json() == cfg.to_json());

    auto j = cfg.to_json();
    j["drop_probability"] = 1.0;
    CHECK_THROWS_AS(SimConfig::from_json(j), std::invalid_argument);
    j = cfg.to_json();
    j["delay_range"] = {5, 2};
    CHECK_THROWS_AS(SimConfig::from_json(j), std::invalid_argument);
    j = cfg.to_json();
    j["validator_count"] = 0;
    CHECK_THROWS_AS(SimConfig::from_json(j), std::invalid_argument);
    j = cfg.to_json();
    j["crash_schedule"] = {{{"validator", 9}, {"crash_tick", 1}}};
    CHECK_THROWS_AS(SimConfig::from_json(j), std::invalid_argument);

    auto w = generate_workload({2, 5, 1, 10}, 4);
    auto cmds = w.commands(3, 2);
    cmds[1].target = 2;
    auto parsed = workload_from_json(workload_to_json(cmds));
    REQUIRE(parsed.size() == cmds.size());
    for (std::size_t i = 0; i < cmds.size(); ++i) {
        CHECK(parsed[i].tick == cmds[i].tick);
        CHECK(parsed[i].tx == cmds[i].tx);
        CHECK(parsed[i].target == cmds[i].target);
    }
    CHECK_THROWS(workload_from_json(nlohmann::json::parse(R"([{"tick":1,"tx":"zz"}])")));
}

TEST_CASE("[consensus-harness] gossip from a single entry validator reaches every block")
{
    auto w = generate_workload({12, 8, 1, 20}, 4);
    SimConfig cfg;
    cfg.seed = 12;
    cfg.genesis = w.genesis;
    cfg.max_height = 25;
    cfg.delay_max = 3;
    auto cmds = w.commands(1, 6);
    for (auto& c : cmds) c.target = 1;
    auto trace = run_simulation(cfg, cmds);
    CHECK(verify_replication(trace));
    std::size_t committed = 0;
    for (const auto& b : trace.chain) committed += b.height ? b.txs.size() : 0;
    CHECK(committed == cmds.size());
}

TEST_CASE("[consensus-harness] mempool admission")
{
    Net n;
    Application app(n.genesis);
    auto coins = coins_of(app.state(), n.bob.pubkey_hash());
    auto a = build_transfer(n.bob, coins, n.alice.pubkey_hash(), 500);
    auto b = build_transfer(n.bob, coins, key(9).pubkey_hash(), 500);
    CHECK(app.check_tx(a).ok());
    CHECK(app.check_tx(a).code == Code::replay);
    CHECK(app.check_tx(b).code == Code::value_mismatch);
    CHECK(app.mempool().size() == 1);
    CHECK(app.propose(1, 10).txs.size() == 1);
    CHECK(app.state().utxos().size() == n.cluster.node(0).state().utxos().size());

    Mempool pool;
    CHECK(pool.add(a));
    CHECK_FALSE(pool.add(a));
    CHECK_FALSE(pool.add(b));
    CHECK(pool.spender_of(OutPoint{a.inputs[0].prev_field, static_cast<std::uint32_t>(a.inputs[0].output_index)}) == tx_hash(a));
}

TEST_CASE("[consensus-harness] reap honours the block size limit")
{
    Net n;
    Application app(n.genesis);
    LedgerState shadow = genesis_state(n.genesis);
    for (int i = 0; i < 6; ++i) {
        auto tx = pay(shadow, n.alice, n.bob.pubkey_hash(), 10);
        commit_tx(shadow, tx);
        REQUIRE(app.check_tx(tx).ok());
    }
    CHECK(app.mempool().reap(4).size() == 4);
    auto block = app.propose(0, 4);
    CHECK(block.txs.size() == 4);
    CHECK(app.evaluate_block(block).ok());
}
