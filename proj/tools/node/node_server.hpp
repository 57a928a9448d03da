#ifndef DEBTLEDGER_NODE_SERVER_HPP
#define DEBTLEDGER_NODE_SERVER_HPP

#include <debtledger/application.hpp>

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace debtledger::node {

struct NodeOptions {
    // Zero commits a block right after every accepted transaction; otherwise
    // pending transactions are committed every block_ms milliseconds.
    std::uint64_t block_ms = 0;
    std::size_t max_block_txs = 1000;
    // Committed blocks are appended here as JSON lines when set.
    std::optional<std::filesystem::path> block_log;
};

/// Replays a block log written by a previous run. A missing file is an empty
/// log. Throws LedgerError if a block fails to decode or apply.
Application load_application(const Genesis& genesis, const std::optional<std::filesystem::path>& block_log);

/// A single-validator node: one Application behind an HTTP surface.
/// Queries read under a shared lock; submissions and commits are exclusive.
class NodeServer {
public:
    NodeServer(Application app, NodeOptions opts);
    ~NodeServer();
    NodeServer(const NodeServer&) = delete;
    NodeServer& operator=(const NodeServer&) = delete;

    /// Binds host:port (port 0 picks a free one). Returns the bound port, or
    /// -1 if binding failed.
    int bind(const std::string& host, int port);
    /// Blocks serving requests until stop().
    void serve();
    /// serve() on a background thread; returns once the listener is up.
    void start();
    void stop();

    AbciResponse submit_hex(std::string_view hex);
    AbciResponse query(std::string_view path) const;
    /// Commits the mempool as a block if it holds anything.
    std::optional<Hash32> commit_pending();

private:
    std::optional<Hash32> commit_locked();
    void producer_loop();

    Application app_;
    NodeOptions opts_;
    mutable std::shared_mutex mutex_;
    std::unique_ptr<httplib::Server> http_;
    std::ofstream log_;
    std::thread listener_;
    std::thread producer_;
    std::mutex wake_mutex_;
    std::condition_variable wake_;
    bool stopping_ = false;
};

} // namespace debtledger::node

#endif
