#include <debtledger/simulation.hpp>
#include <debtledger/workload.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

using namespace debtledger;

namespace {

nlohmann::json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return nlohmann::json::parse(in);
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App cli{"seeded BFT network simulator"};
    cli.require_subcommand(1);

    std::string config_path, workload_path, out_path;
    auto* run = cli.add_subcommand("run", "run a simulation and emit its commit trace as JSON lines");
    run->add_option("--config", config_path, "SimConfig JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--workload", workload_path, "client commands JSON")->check(CLI::ExistingFile);
    run->add_option("--out", out_path, "trace file; stdout when omitted");

    WorkloadParams params;
    std::uint32_t validators = 4;
    std::uint64_t first_tick = 1, spacing = 2;
    std::string genesis_out, workload_out;
    auto* gen = cli.add_subcommand("workload", "generate a valid random workload and its genesis");
    gen->add_option("--seed", params.seed)->capture_default_str();
    gen->add_option("--accounts", params.accounts)->capture_default_str();
    gen->add_option("--issuers", params.issuers)->capture_default_str();
    gen->add_option("--txs", params.tx_count)->capture_default_str();
    gen->add_option("--validators", validators)->capture_default_str();
    gen->add_option("--first-tick", first_tick)->capture_default_str();
    gen->add_option("--spacing", spacing, "ticks between submissions")->capture_default_str();
    gen->add_option("--genesis-out", genesis_out)->required();
    gen->add_option("--workload-out", workload_out)->required();

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return cli.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            auto base = std::filesystem::path(config_path).parent_path().string();
            auto cfg = SimConfig::from_json(read_json(config_path), base.empty() ? "." : base);
            std::vector<ClientCommand> workload;
            if (!workload_path.empty()) workload = workload_from_json(read_json(workload_path));

            auto trace = run_simulation(cfg, workload);
            auto lines = trace.to_jsonl();
            if (out_path.empty()) std::cout << lines;
            else write_text(out_path, lines);

            bool ok = verify_replication(trace);
            std::uint64_t top = 0;
            for (const auto& f : trace.finals) top = std::max(top, f.height);
            std::cerr << "heights committed: " << top << ", end tick: " << trace.end_tick
                      << ", messages: " << trace.messages_sent << " sent / " << trace.messages_dropped
                      << " dropped, replication " << (ok ? "consistent" : "DIVERGED") << '\n';
            return ok ? 0 : 3;
        }
        auto w = generate_workload(params, validators);
        write_text(genesis_out, w.genesis.to_json().dump(2) + "\n");
        write_text(workload_out, workload_to_json(w.commands(first_tick, spacing)).dump() + "\n");
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
