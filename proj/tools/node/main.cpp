#include "node_server.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

using namespace debtledger;

int main(int argc, char** argv)
{
    CLI::App cli{"debt ledger node: one validator serving the HTTP query and submission API"};
    std::string genesis_path;
    std::string host = "127.0.0.1";
    int port = 26657;
    node::NodeOptions opts;
    std::string data;
    cli.add_option("--genesis", genesis_path, "genesis JSON file")->required()->check(CLI::ExistingFile);
    cli.add_option("--host", host, "listen address")->capture_default_str();
    cli.add_option("--port", port, "listen port, 0 for any free port")->capture_default_str();
    cli.add_option("--block-ms", opts.block_ms, "block interval in ms; 0 commits after each accepted tx")
        ->capture_default_str();
    cli.add_option("--max-block-txs", opts.max_block_txs, "transactions per block")->capture_default_str();
    cli.add_option("--data", data, "append-only block log; replayed on startup");
    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return cli.exit(e) == 0 ? 0 : 1;
    }
    if (!data.empty()) opts.block_log = data;

    // Block the shutdown signals before any thread starts so only sigwait sees them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    try {
        auto genesis = Genesis::load(genesis_path);
        node::NodeServer server(node::load_application(genesis, opts.block_log), opts);
        int bound = server.bind(host, port);
        if (bound < 0) {
            std::cerr << "cannot listen on " << host << ':' << port << '\n';
            return 2;
        }
        server.start();
        std::cout << "listening on http://" << host << ':' << bound << std::endl;

        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
