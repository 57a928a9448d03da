#include <debtledger/application.hpp>

#include <charconv>

namespace debtledger {

nlohmann::json AbciResponse::to_json() const
{
    return {{"code", static_cast<std::uint32_t>(code)}, {"payload", payload}, {"log", log}};
}

namespace {

AbciResponse reject(const Status& s)
{
    return {s.code, nullptr, s.log};
}

std::optional<Transaction> decode(ByteView bytes, AbciResponse& error)
{
    try {
        return canonical_decode(bytes);
    } catch (const LedgerError& e) {
        error = {Code::malformed, nullptr, e.what()};
        return std::nullopt;
    }
}

nlohmann::json entry_to_json(const OutstandingDebtEntry& e)
{
    return {{"odt_hash", e.odt_hash.hex()},
            {"creditor", e.creditor_lock.pubkey_hash.hex()},
            {"remaining", e.remaining},
            {"debt_origin", e.debt_origin.hex()},
            {"loan_type", e.loan_type}};
}

bool consume(std::string_view& path, std::string_view prefix)
{
    if (path.substr(0, prefix.size()) != prefix) return false;
    path.remove_prefix(prefix.size());
    return true;
}

AbciResponse bad_query(std::string log)
{
    return {Code::malformed, nullptr, std::move(log)};
}

} // namespace

Application::Application(Genesis genesis)
    : genesis_(std::move(genesis)),
      committed_(std::make_shared<const LedgerState>(genesis_state(genesis_))),
      last_root_(state_root(*committed_)),
      blocks_{genesis_block(genesis_)},
      pending_(*committed_)
{
}

Application Application::restore(Genesis genesis, const std::vector<Block>& log)
{
    Application app(std::move(genesis));
    if (!log.empty() && block_hash(log.front()) != app.last_block_hash())
        throw LedgerError(Code::malformed, "block log does not start at this genesis");
    for (std::size_t i = 1; i < log.size(); ++i) app.apply_block(log[i]);
    return app;
}

Hash32 Application::last_block_hash() const
{
    return block_hash(blocks_.back());
}

AbciResponse Application::check_tx(ByteView tx_bytes)
{
    AbciResponse error;
    auto tx = decode(tx_bytes, error);
    if (!tx) return error;
    return check_tx(*tx);
}

AbciResponse Application::check_tx(const Transaction& tx)
{
    auto hash = tx_hash(tx);
    if (mempool_.contains(hash)) return {Code::replay, nullptr, "transaction already in mempool"};
    if (tx.kind == TxKind::normal) {
        for (const auto& in : tx.inputs) {
            if (in.output_index < 0) continue;
            OutPoint point{in.prev_field, static_cast<std::uint32_t>(in.output_index)};
            if (auto other = mempool_.spender_of(point))
                return {Code::value_mismatch, nullptr, "conflicts with pooled transaction " + other->hex()};
        }
    }
    if (auto s = pending_.validate(tx); !s) return reject(s);

    mempool_.add(tx);
    pending_.apply(tx);
    return {Code::ok, {{"tx_hash", hash.hex()}}, ""};
}

void Application::begin_block(std::uint32_t proposer)
{
    working_ = *committed_;
    proposer_ = proposer;
    delivered_.clear();
}

AbciResponse Application::deliver_tx(ByteView tx_bytes)
{
    AbciResponse error;
    auto tx = decode(tx_bytes, error);
    if (!tx) return error;
    return deliver_tx(*tx);
}

AbciResponse Application::deliver_tx(const Transaction& tx)
{
    if (!working_) begin_block(0);
    auto hash = tx_hash(tx);
    // Transactions this node admitted to its mempool already had their
    // signatures checked.
    bool verified = mempool_.contains(hash);
    if (auto s = working_->validate(tx, !verified); !s) return reject(s);
    working_->apply(tx);
    delivered_.push_back(tx);
    return {Code::ok, {{"tx_hash", hash.hex()}}, ""};
}

Hash32 Application::commit()
{
    if (!working_) begin_block(0);
    const std::uint64_t height = committed_->height() + 1;
    working_->set_height(height);
    blocks_.push_back(make_block(height, last_block_hash(), proposer_.value_or(0), std::move(delivered_)));
    committed_ = std::make_shared<const LedgerState>(std::move(*working_));
    last_root_ = state_root(*committed_);
    working_.reset();
    proposer_.reset();
    delivered_.clear();
    recheck_mempool();
    return last_root_;
}

void Application::discard_uncommitted()
{
    working_.reset();
    proposer_.reset();
    delivered_.clear();
}

void Application::clear_mempool()
{
    mempool_.clear();
    pending_ = *committed_;
}

void Application::recheck_mempool()
{
    Mempool old = std::move(mempool_);
    mempool_ = Mempool{};
    pending_ = *committed_;
    for (const auto& entry : old.entries()) {
        if (committed_->is_applied(entry.hash)) continue;
        if (!pending_.validate(entry.tx, false)) continue;
        if (!mempool_.add(entry.tx)) continue;
        pending_.apply(entry.tx);
    }
}

Status Application::evaluate_block(const Block& block) const
{
    if (block.height != height() + 1) return Status::reject(Code::malformed, "block height is not the next height");
    if (block.prev_hash != last_block_hash()) return Status::reject(Code::malformed, "block does not extend the chain tip");
    if (!merkle_consistent(block)) return Status::reject(Code::malformed, "merkle root does not match transactions");

    LedgerState scratch = *committed_;
    for (const auto& tx : block.txs) {
        bool verified = mempool_.contains(tx_hash(tx));
        if (auto s = scratch.validate(tx, !verified); !s) return s;
        scratch.apply(tx);
    }
    return Status::success();
}

Hash32 Application::apply_block(const Block& block)
{
    if (auto s = evaluate_block(block); !s) throw LedgerError(s.code, s.log);
    begin_block(block.proposer);
    for (const auto& tx : block.txs) {
        auto r = deliver_tx(tx);
        if (!r.ok()) {
            discard_uncommitted();
            throw LedgerError(r.code, r.log);
        }
    }
    return commit();
}

Block Application::propose(std::uint32_t proposer, std::size_t max_txs) const
{
    return make_block(height() + 1, last_block_hash(), proposer, mempool_.reap(max_txs));
}

AbciResponse Application::query(std::string_view path) const
{
    auto state = committed_;
    std::string_view rest = path;

    if (consume(rest, "/balance/")) {
        auto owner = Hash32::from_hex(rest);
        if (!owner) return bad_query("balance expects a 32-byte pubkey hash in hex");
        nlohmann::json utxos = nlohmann::json::array();
        Amount total = 0;
        for (const auto& [point, amount] : utxos_of(*state, *owner)) {
            utxos.push_back({{"tx_hash", point.tx_hash.hex()}, {"index", point.index}, {"amount", amount}});
            total += amount;
        }
        return {Code::ok, {{"balance", total}, {"utxos", std::move(utxos)}}, ""};
    }
    if (rest == "/debt/aggregate") return {Code::ok, aggregate_debt(*state), ""};
    if (consume(rest, "/debt/creditor/")) {
        auto creditor = Hash32::from_hex(rest);
        if (!creditor) return bad_query("creditor expects a 32-byte pubkey hash in hex");
        nlohmann::json list = nlohmann::json::array();
        for (const auto& e : debts_of_creditor(*state, *creditor)) list.push_back(entry_to_json(e));
        return {Code::ok, std::move(list), ""};
    }
    if (consume(rest, "/debt/entry/")) {
        auto odt = Hash32::from_hex(rest);
        if (!odt) return bad_query("entry expects a 32-byte outstanding debt hash in hex");
        const OutstandingDebtEntry* e = state->find_debt(*odt);
        if (!e) return {Code::unknown_debt, nullptr, "no such outstanding debt transaction"};
        return {Code::ok, entry_to_json(*e), ""};
    }
    if (consume(rest, "/block/")) {
        std::uint64_t h = 0;
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), h);
        if (ec != std::errc{} || ptr != rest.data() + rest.size()) return bad_query("block expects a decimal height");
        if (h >= blocks_.size()) return bad_query("no block at height " + std::to_string(h));
        return {Code::ok, block_to_json(blocks_[h]), ""};
    }
    if (rest == "/status")
        return {Code::ok, {{"height", state->height()}, {"state_root", last_root_.hex()}, {"mempool", mempool_.size()}}, ""};
    return bad_query("unknown query path " + std::string(path));
}

} // namespace debtledger
