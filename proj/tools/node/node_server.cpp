#include "node_server.hpp"

#include <httplib.h>

#include <cctype>

namespace debtledger::node {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

void reply(httplib::Response& res, const AbciResponse& r)
{
    res.status = 200;
    res.set_content(r.to_json().dump(), "application/json");
}

} // namespace

Application load_application(const Genesis& genesis, const std::optional<std::filesystem::path>& block_log)
{
    std::vector<Block> log{genesis_block(genesis)};
    if (block_log && std::filesystem::exists(*block_log)) {
        std::ifstream in(*block_log);
        std::string line;
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw LedgerError(Code::malformed, std::string("block log line is not JSON: ") + e.what());
            }
            log.push_back(block_from_json(j));
        }
    }
    return Application::restore(genesis, log);
}

NodeServer::NodeServer(Application app, NodeOptions opts)
    : app_(std::move(app)), opts_(std::move(opts)), http_(std::make_unique<httplib::Server>())
{
    if (opts_.block_log) {
        log_.open(*opts_.block_log, std::ios::app);
        if (!log_) throw std::runtime_error("cannot open block log " + opts_.block_log->string());
    }

    http_->Post("/tx", [this](const httplib::Request& req, httplib::Response& res) { reply(res, submit_hex(req.body)); });
    http_->Get(R"(/(balance|debt|block|status)(/.*)?)", [this](const httplib::Request& req, httplib::Response& res) {
        reply(res, query(req.path));
    });
    http_->set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (res.status != 404 && res.status != 405) return;
        reply(res, {Code::malformed, nullptr, "no route for " + req.method + " " + req.path});
    });

    if (opts_.block_ms > 0) producer_ = std::thread([this] { producer_loop(); });
}

NodeServer::~NodeServer()
{
    stop();
}

int NodeServer::bind(const std::string& host, int port)
{
    if (port == 0) return http_->bind_to_any_port(host);
    return http_->bind_to_port(host, port) ? port : -1;
}

void NodeServer::serve()
{
    http_->listen_after_bind();
}

void NodeServer::start()
{
    listener_ = std::thread([this] { serve(); });
    http_->wait_until_ready();
}

void NodeServer::stop()
{
    {
        std::lock_guard lock(wake_mutex_);
        if (stopping_) return;
        stopping_ = true;
    }
    wake_.notify_all();
    http_->stop();
    if (listener_.joinable()) listener_.join();
    if (producer_.joinable()) producer_.join();
}

AbciResponse NodeServer::submit_hex(std::string_view hex)
{
    auto raw = from_hex(trim(hex));
    if (!raw) return {Code::malformed, nullptr, "request body must be the transaction's canonical encoding in hex"};
    std::unique_lock lock(mutex_);
    auto r = app_.check_tx(*raw);
    if (r.ok() && opts_.block_ms == 0) commit_locked();
    return r;
}

AbciResponse NodeServer::query(std::string_view path) const
{
    std::shared_lock lock(mutex_);
    return app_.query(path);
}

std::optional<Hash32> NodeServer::commit_pending()
{
    std::unique_lock lock(mutex_);
    return commit_locked();
}

std::optional<Hash32> NodeServer::commit_locked()
{
    if (app_.mempool().empty()) return std::nullopt;
    auto root = app_.apply_block(app_.propose(0, opts_.max_block_txs));
    if (log_) {
        log_ << block_to_json(app_.blocks().back()).dump() << '\n';
        log_.flush();
    }
    return root;
}

void NodeServer::producer_loop()
{
    std::unique_lock lock(wake_mutex_);
    while (!stopping_) {
        wake_.wait_for(lock, std::chrono::milliseconds(opts_.block_ms));
        if (stopping_) break;
        lock.unlock();
        commit_pending();
        lock.lock();
    }
}

} // namespace debtledger::node
