#ifndef DEBTLEDGER_SIMULATION_HPP
#define DEBTLEDGER_SIMULATION_HPP

#include <debtledger/genesis.hpp>

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace debtledger {

struct CrashEvent {
    std::uint32_t validator = 0;
    std::uint64_t crash_tick = 0;
    std::optional<std::uint64_t> restart_tick;
};

struct SimConfig {
    std::uint32_t validator_count = 4;
    std::uint64_t seed = 0;
    std::uint64_t delay_min = 1;
    std::uint64_t delay_max = 1;
    // Liveness runs assume well under a third of messages are lost.
    double drop_probability = 0.0;
    std::vector<CrashEvent> crash_schedule;
    std::uint64_t block_interval = 10;
    std::size_t max_block_txs = 100;
    // Run ends when every live validator has committed max_height, or at max_ticks.
    std::uint64_t max_height = 10;
    std::uint64_t max_ticks = 1'000'000;
    // Per-step timeout for round 0; grows by delay_max each further round.
    // Zero selects 2 * delay_max + 1.
    std::uint64_t step_timeout = 0;
    Genesis genesis;

    /// Throws std::invalid_argument on schema errors. `genesis` may be an
    /// inline object; `genesis_file` is resolved relative to base_dir.
    static SimConfig from_json(const nlohmann::json& j, const std::string& base_dir = ".");
    nlohmann::json to_json() const;
};

struct ClientCommand {
    std::uint64_t tick = 0;
    Bytes tx;
    // Validator that receives the submission and gossips it; all live
    // validators when unset.
    std::optional<std::uint32_t> target;
};

std::vector<ClientCommand> workload_from_json(const nlohmann::json& j);
nlohmann::json workload_to_json(const std::vector<ClientCommand>& cmds);

/// One validator committing one height.
struct CommitRecord {
    std::uint64_t height = 0;
    std::uint32_t validator = 0;
    Hash32 block_hash;
    Hash32 state_root;
    std::uint64_t tick = 0;
    std::uint32_t round = 0;
    std::size_t tx_count = 0;

    bool operator==(const CommitRecord&) const = default;
};

struct ValidatorSummary {
    std::uint32_t validator = 0;
    bool live = true;
    std::uint64_t height = 0;
    Hash32 state_root;

    bool operator==(const ValidatorSummary&) const = default;
};

struct SimTrace {
    std::vector<CommitRecord> commits;
    std::vector<ValidatorSummary> finals;
    // Committed chain of the most advanced validator, for replay checks.
    std::vector<Block> chain;
    std::uint64_t end_tick = 0;
    std::uint64_t messages_sent = 0;
    std::uint64_t messages_dropped = 0;

    /// One JSON object per line: every commit event, then one line per
    /// validator's final state.
    std::string to_jsonl() const;
};

SimTrace run_simulation(const SimConfig& cfg, const std::vector<ClientCommand>& workload);

/// Every committed height has one block hash and one state root across all
/// validators that committed it, and final summaries agree with the commits.
bool verify_replication(const SimTrace& trace);

} // namespace debtledger

#endif
