#include <debtledger/application.hpp>
#include <debtledger/consensus.hpp>
#include <debtledger/simulation.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>

namespace debtledger {

// ---------------------------------------------------------------------------
// Configuration and workload files

SimConfig SimConfig::from_json(const nlohmann::json& j, const std::string& base_dir)
{
    if (!j.is_object()) throw std::invalid_argument("simulation config must be a JSON object");
    SimConfig cfg;
    auto get_u64 = [&](const char* key, std::uint64_t& out) {
        if (!j.contains(key)) return;
        if (!j[key].is_number_unsigned()) throw std::invalid_argument(std::string(key) + " must be a non-negative integer");
        out = j[key].get<std::uint64_t>();
    };

    std::uint64_t validators = cfg.validator_count;
    get_u64("validator_count", validators);
    if (validators == 0 || validators > 1024) throw std::invalid_argument("validator_count must be in [1, 1024]");
    cfg.validator_count = static_cast<std::uint32_t>(validators);
    get_u64("seed", cfg.seed);
    if (j.contains("delay_range")) {
        const auto& r = j["delay_range"];
        if (!r.is_array() || r.size() != 2 || !r[0].is_number_unsigned() || !r[1].is_number_unsigned())
            throw std::invalid_argument("delay_range must be [min, max]");
        cfg.delay_min = r[0].get<std::uint64_t>();
        cfg.delay_max = r[1].get<std::uint64_t>();
    }
    get_u64("delay_min", cfg.delay_min);
    get_u64("delay_max", cfg.delay_max);
    if (cfg.delay_min > cfg.delay_max) throw std::invalid_argument("delay_range min exceeds max");
    if (j.contains("drop_probability")) {
        if (!j["drop_probability"].is_number()) throw std::invalid_argument("drop_probability must be a number");
        cfg.drop_probability = j["drop_probability"].get<double>();
    }
    if (!(cfg.drop_probability >= 0.0 && cfg.drop_probability < 1.0))
        throw std::invalid_argument("drop_probability must be in [0, 1)");
    if (j.contains("crash_schedule")) {
        if (!j["crash_schedule"].is_array()) throw std::invalid_argument("crash_schedule must be an array");
        for (const auto& c : j["crash_schedule"]) {
            CrashEvent ev;
            if (!c.is_object() || !c.contains("validator") || !c.contains("crash_tick"))
                throw std::invalid_argument("crash entry needs validator and crash_tick");
            ev.validator = c["validator"].get<std::uint32_t>();
            ev.crash_tick = c["crash_tick"].get<std::uint64_t>();
            if (c.contains("restart_tick") && !c["restart_tick"].is_null())
                ev.restart_tick = c["restart_tick"].get<std::uint64_t>();
            if (ev.validator >= cfg.validator_count) throw std::invalid_argument("crash entry names an unknown validator");
            if (ev.restart_tick && *ev.restart_tick <= ev.crash_tick)
                throw std::invalid_argument("restart_tick must follow crash_tick");
            cfg.crash_schedule.push_back(ev);
        }
    }
    get_u64("block_interval", cfg.block_interval);
    std::uint64_t max_txs = cfg.max_block_txs;
    get_u64("max_block_txs", max_txs);
    cfg.max_block_txs = static_cast<std::size_t>(max_txs);
    get_u64("max_height", cfg.max_height);
    get_u64("max_ticks", cfg.max_ticks);
    get_u64("step_timeout", cfg.step_timeout);

    if (j.contains("genesis")) {
        cfg.genesis = Genesis::from_json(j["genesis"]);
    } else if (j.contains("genesis_file")) {
        std::filesystem::path p = j["genesis_file"].get<std::string>();
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        cfg.genesis = Genesis::load(p);
    }
    return cfg;
}

nlohmann::json SimConfig::to_json() const
{
    nlohmann::json crashes = nlohmann::json::array();
    for (const auto& c : crash_schedule) {
        nlohmann::json e{{"validator", c.validator}, {"crash_tick", c.crash_tick}};
        e["restart_tick"] = c.restart_tick ? nlohmann::json(*c.restart_tick) : nlohmann::json(nullptr);
        crashes.push_back(e);
    }
    return {{"validator_count", validator_count},
            {"seed", seed},
            {"delay_range", {delay_min, delay_max}},
            {"drop_probability", drop_probability},
            {"crash_schedule", crashes},
            {"block_interval", block_interval},
            {"max_block_txs", max_block_txs},
            {"max_height", max_height},
            {"max_ticks", max_ticks},
            {"step_timeout", step_timeout},
            {"genesis", genesis.to_json()}};
}

std::vector<ClientCommand> workload_from_json(const nlohmann::json& j)
{
    const nlohmann::json& list = j.is_object() && j.contains("commands") ? j["commands"] : j;
    if (!list.is_array()) throw std::invalid_argument("workload must be an array of commands");
    std::vector<ClientCommand> out;
    for (const auto& c : list) {
        if (!c.is_object() || !c.contains("tick") || !c.contains("tx"))
            throw std::invalid_argument("workload command needs tick and tx");
        ClientCommand cmd;
        cmd.tick = c["tick"].get<std::uint64_t>();
        auto raw = from_hex(c["tx"].get<std::string>());
        if (!raw) throw std::invalid_argument("workload tx is not hex");
        cmd.tx = std::move(*raw);
        if (c.contains("to") && !c["to"].is_null()) cmd.target = c["to"].get<std::uint32_t>();
        out.push_back(std::move(cmd));
    }
    return out;
}

nlohmann::json workload_to_json(const std::vector<ClientCommand>& cmds)
{
    nlohmann::json list = nlohmann::json::array();
    for (const auto& c : cmds) {
        nlohmann::json e{{"tick", c.tick}, {"tx", to_hex(c.tx)}};
        if (c.target) e["to"] = *c.target;
        list.push_back(std::move(e));
    }
    return list;
}

std::string SimTrace::to_jsonl() const
{
    std::ostringstream out;
    for (const auto& c : commits) {
        nlohmann::json j{{"event", "commit"},   {"height", c.height},
                         {"validator", c.validator}, {"block_hash", c.block_hash.hex()},
                         {"state_root", c.state_root.hex()}, {"tick", c.tick},
                         {"round", c.round},       {"txs", c.tx_count}};
        out << j.dump() << '\n';
    }
    for (const auto& f : finals) {
        nlohmann::json j{{"event", "final"},    {"validator", f.validator}, {"live", f.live},
                         {"height", f.height},  {"state_root", f.state_root.hex()}};
        out << j.dump() << '\n';
    }
    return out.str();
}

bool verify_replication(const SimTrace& trace)
{
    std::map<std::uint64_t, std::pair<Hash32, Hash32>> by_height;
    std::map<std::uint32_t, std::uint64_t> last_height;
    for (const auto& c : trace.commits) {
        auto [it, inserted] = by_height.emplace(c.height, std::make_pair(c.block_hash, c.state_root));
        if (!inserted && (it->second.first != c.block_hash || it->second.second != c.state_root)) return false;
        auto [lh, fresh] = last_height.emplace(c.validator, c.height);
        if (!fresh) {
            if (c.height <= lh->second) return false;
            lh->second = c.height;
        }
    }
    std::map<std::uint64_t, Hash32> final_roots;
    for (const auto& f : trace.finals) {
        if (auto it = by_height.find(f.height); it != by_height.end() && it->second.second != f.state_root)
            return false;
        auto [it, inserted] = final_roots.emplace(f.height, f.state_root);
        if (!inserted && it->second != f.state_root) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Event-driven network of validators

namespace {

enum class MsgType { tx, proposal, prevote, precommit, commit_cert, sync_request, sync_reply };
enum class Step { idle, propose, prevote, precommit };
enum class EventType { deliver, timeout, start_height, crash, restart, client };

struct Message {
    MsgType type = MsgType::tx;
    std::uint32_t from = 0;
    std::uint64_t height = 0;
    std::uint32_t round = 0;
    std::optional<Hash32> value;
    std::shared_ptr<const Block> block;
    std::shared_ptr<const std::vector<Block>> blocks;
    std::shared_ptr<const Bytes> tx;
};

struct Event {
    std::uint64_t tick = 0;
    std::uint64_t seq = 0;
    EventType type = EventType::deliver;
    std::uint32_t node = 0;
    Message msg;
    // Timer identity; stale timers are ignored.
    std::uint64_t epoch = 0;
    std::uint64_t height = 0;
    std::uint32_t round = 0;
    Step step = Step::idle;
    std::size_t index = 0;
};

struct EventOrder {
    bool operator()(const Event& a, const Event& b) const
    {
        if (a.tick != b.tick) return a.tick > b.tick;
        return a.seq > b.seq;
    }
};

using VoteBook = std::map<std::uint32_t, std::map<std::uint32_t, std::optional<Hash32>>>;

struct Validator {
    std::uint32_t id = 0;
    Application app;
    bool live = true;
    std::uint64_t epoch = 0;

    std::uint32_t round = 0;
    Step step = Step::idle;
    std::optional<Block> locked;
    std::uint32_t locked_round = 0;
    std::map<std::uint32_t, Hash32> proposals;
    std::map<Hash32, Block> known_blocks;
    VoteBook prevotes;
    VoteBook precommits;
    std::vector<Message> future;
    std::optional<std::uint64_t> last_sync_request;
    std::map<std::pair<std::uint32_t, std::uint64_t>, std::uint64_t> helped;

    explicit Validator(std::uint32_t i, const Genesis& g) : id(i), app(g) {}

    std::uint64_t next_height() const { return app.height() + 1; }

    void reset_round_state()
    {
        round = 0;
        step = Step::idle;
        locked.reset();
        locked_round = 0;
        proposals.clear();
        known_blocks.clear();
        prevotes.clear();
        precommits.clear();
    }
};

// Count of votes for value in one round.
std::size_t tally(const VoteBook& book, std::uint32_t round, const std::optional<Hash32>& value)
{
    auto it = book.find(round);
    if (it == book.end()) return 0;
    std::size_t n = 0;
    for (const auto& [voter, v] : it->second) n += v == value ? 1 : 0;
    return n;
}

std::optional<Hash32> quorum_value(const VoteBook& book, std::uint32_t round, std::size_t q)
{
    auto it = book.find(round);
    if (it == book.end()) return std::nullopt;
    std::map<Hash32, std::size_t> counts;
    for (const auto& [voter, v] : it->second)
        if (v && ++counts[*v] >= q) return *v;
    return std::nullopt;
}

class Network {
public:
    Network(const SimConfig& cfg, const std::vector<ClientCommand>& workload)
        : cfg_(cfg), workload_(workload), rng_(cfg.seed), q_(quorum(cfg.validator_count))
    {
        for (std::uint32_t i = 0; i < cfg.validator_count; ++i) nodes_.emplace_back(i, cfg.genesis);
        base_timeout_ = cfg.step_timeout ? cfg.step_timeout : 2 * cfg.delay_max + 1;
    }

    SimTrace run()
    {
        for (auto& v : nodes_) schedule_start(v, 0);
        for (const auto& c : cfg_.crash_schedule) {
            Event crash;
            crash.type = EventType::crash;
            crash.node = c.validator;
            push(c.crash_tick, std::move(crash));
            if (c.restart_tick) {
                Event restart;
                restart.type = EventType::restart;
                restart.node = c.validator;
                push(*c.restart_tick, std::move(restart));
                ++pending_restarts_;
            }
        }
        for (std::size_t i = 0; i < workload_.size(); ++i) {
            Event e;
            e.type = EventType::client;
            e.index = i;
            push(workload_[i].tick, std::move(e));
        }

        while (!queue_.empty()) {
            Event ev = queue_.top();
            if (ev.tick > cfg_.max_ticks) break;
            queue_.pop();
            now_ = ev.tick;
            dispatch(ev);
            if (finished()) break;
        }
        return finish();
    }

private:
    // -- scheduling -------------------------------------------------------

    void push(std::uint64_t tick, Event ev)
    {
        ev.tick = tick;
        ev.seq = seq_++;
        queue_.push(std::move(ev));
    }

    std::uint64_t draw_delay()
    {
        std::uint64_t span = cfg_.delay_max - cfg_.delay_min + 1;
        return cfg_.delay_min + rng_() % span;
    }

    bool draw_drop()
    {
        if (cfg_.drop_probability <= 0.0) return false;
        double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        return u < cfg_.drop_probability;
    }

    void send(std::uint32_t to, Message msg)
    {
        Event e;
        e.type = EventType::deliver;
        e.node = to;
        if (to == msg.from) {
            e.msg = std::move(msg);
            push(now_, std::move(e));
            return;
        }
        ++sent_;
        if (draw_drop()) {
            ++dropped_;
            return;
        }
        std::uint64_t delay = draw_delay();
        e.msg = std::move(msg);
        push(now_ + delay, std::move(e));
    }

    void broadcast(const Message& msg, bool include_self = true)
    {
        for (std::uint32_t i = 0; i < nodes_.size(); ++i)
            if (include_self || i != msg.from) send(i, msg);
    }

    std::uint64_t timeout_for(std::uint32_t round) const { return base_timeout_ + round * cfg_.delay_max; }

    void schedule_timer(Validator& v, Step step)
    {
        Event e;
        e.type = EventType::timeout;
        e.node = v.id;
        e.epoch = v.epoch;
        e.height = v.next_height();
        e.round = v.round;
        e.step = step;
        push(now_ + timeout_for(v.round), std::move(e));
    }

    void schedule_start(Validator& v, std::uint64_t delay)
    {
        Event e;
        e.type = EventType::start_height;
        e.node = v.id;
        e.epoch = v.epoch;
        e.height = v.next_height();
        push(now_ + delay, std::move(e));
    }

    // -- dispatch ---------------------------------------------------------

    void dispatch(const Event& ev)
    {
        Validator& v = nodes_[ev.node];
        switch (ev.type) {
        case EventType::crash: on_crash(v); return;
        case EventType::restart: on_restart(v); return;
        case EventType::client: on_client(ev.index); return;
        default: break;
        }
        if (!v.live) return;
        switch (ev.type) {
        case EventType::start_height:
            if (ev.epoch == v.epoch && ev.height == v.next_height() && v.step == Step::idle) enter_round(v, 0);
            return;
        case EventType::timeout:
            if (ev.epoch == v.epoch && ev.height == v.next_height() && ev.round == v.round && ev.step == v.step)
                on_timeout(v);
            return;
        case EventType::deliver: on_message(v, ev.msg); return;
        default: return;
        }
    }

    void on_client(std::size_t index)
    {
        const auto& cmd = workload_[index];
        auto bytes = std::make_shared<const Bytes>(cmd.tx);
        if (cmd.target) {
            if (*cmd.target >= nodes_.size()) return;
            Validator& v = nodes_[*cmd.target];
            if (!v.live) return;
            if (v.app.check_tx(*bytes).ok()) {
                Message m;
                m.type = MsgType::tx;
                m.from = v.id;
                m.tx = bytes;
                broadcast(m, false);
            }
            return;
        }
        for (auto& v : nodes_)
            if (v.live) v.app.check_tx(*bytes);
    }

    void on_crash(Validator& v)
    {
        if (!v.live) return;
        v.live = false;
        ++v.epoch;
        v.app.discard_uncommitted();
        v.app.clear_mempool();
        v.reset_round_state();
        v.future.clear();
        v.last_sync_request.reset();
        v.helped.clear();
    }

    void on_restart(Validator& v)
    {
        if (pending_restarts_ > 0) --pending_restarts_;
        if (v.live) return;
        auto log = v.app.blocks();
        v.app = Application::restore(cfg_.genesis, log);
        v.live = true;
        ++v.epoch;
        v.reset_round_state();
        request_sync(v, std::nullopt);
        schedule_start(v, 0);
    }

    // -- consensus --------------------------------------------------------

    void enter_round(Validator& v, std::uint32_t round)
    {
        if (v.next_height() > cfg_.max_height) {
            v.step = Step::idle;
            return;
        }
        v.round = round;
        v.step = Step::propose;
        schedule_timer(v, Step::propose);

        const std::uint64_t h = v.next_height();
        if (proposer_for(h, round, cfg_.validator_count) == v.id) {
            Block block = v.locked ? *v.locked : v.app.propose(v.id, cfg_.max_block_txs);
            Message m;
            m.type = MsgType::proposal;
            m.from = v.id;
            m.height = h;
            m.round = round;
            m.block = std::make_shared<const Block>(std::move(block));
            broadcast(m);
        }
        if (auto it = v.proposals.find(round); it != v.proposals.end()) prevote_proposal(v, v.known_blocks.at(it->second));
    }

    void prevote_proposal(Validator& v, const Block& block)
    {
        if (v.step != Step::propose) return;
        auto hash = block_hash(block);
        bool valid = block.proposer < cfg_.validator_count && v.app.evaluate_block(block).ok();
        if (v.locked && block_hash(*v.locked) != hash) valid = false;
        cast(v, MsgType::prevote, valid ? std::optional<Hash32>(hash) : std::nullopt);
        v.step = Step::prevote;
        schedule_timer(v, Step::prevote);
    }

    void cast(Validator& v, MsgType type, std::optional<Hash32> value)
    {
        Message m;
        m.type = type;
        m.from = v.id;
        m.height = v.next_height();
        m.round = v.round;
        m.value = value;
        broadcast(m);
    }

    void on_timeout(Validator& v)
    {
        switch (v.step) {
        case Step::propose:
            cast(v, MsgType::prevote, std::nullopt);
            v.step = Step::prevote;
            schedule_timer(v, Step::prevote);
            break;
        case Step::prevote:
            cast(v, MsgType::precommit, std::nullopt);
            v.step = Step::precommit;
            schedule_timer(v, Step::precommit);
            break;
        case Step::precommit: enter_round(v, v.round + 1); break;
        case Step::idle: break;
        }
    }

    void on_message(Validator& v, const Message& m)
    {
        switch (m.type) {
        case MsgType::tx: v.app.check_tx(*m.tx); return;
        case MsgType::sync_request: on_sync_request(v, m); return;
        case MsgType::sync_reply: on_sync_reply(v, m); return;
        case MsgType::commit_cert:
            if (m.height == v.next_height()) commit(v, *m.block, m.round);
            else if (m.height > v.next_height()) request_sync(v, m.from);
            return;
        default: break;
        }

        const std::uint64_t h = v.next_height();
        if (m.height < h) {
            help_straggler(v, m.from, m.height);
            return;
        }
        if (m.height > h) {
            if (v.future.size() < 4096) v.future.push_back(m);
            if (m.height > h + 1 || v.step == Step::idle) request_sync(v, m.from);
            return;
        }

        switch (m.type) {
        case MsgType::proposal: on_proposal(v, m); break;
        case MsgType::prevote: on_prevote(v, m); break;
        case MsgType::precommit: on_precommit(v, m); break;
        default: break;
        }
    }

    void on_proposal(Validator& v, const Message& m)
    {
        if (m.from != proposer_for(m.height, m.round, cfg_.validator_count)) return;
        if (v.proposals.count(m.round)) return;
        auto hash = block_hash(*m.block);
        v.proposals.emplace(m.round, hash);
        v.known_blocks.emplace(hash, *m.block);

        if (m.round == v.round) prevote_proposal(v, *m.block);
        // The block may complete a quorum seen before it arrived.
        check_prevotes(v, m.round);
        check_precommits(v, m.round);
    }

    void on_prevote(Validator& v, const Message& m)
    {
        v.prevotes[m.round].emplace(m.from, m.value);
        check_prevotes(v, m.round);
    }

    void on_precommit(Validator& v, const Message& m)
    {
        v.precommits[m.round].emplace(m.from, m.value);
        if (check_precommits(v, m.round)) return;
        if (m.round == v.round && v.step == Step::precommit && tally(v.precommits, m.round, std::nullopt) >= q_)
            enter_round(v, v.round + 1);
    }

    void check_prevotes(Validator& v, std::uint32_t round)
    {
        if (v.step == Step::idle) return;
        auto polka = quorum_value(v.prevotes, round, q_);
        if (polka) {
            auto known = v.known_blocks.find(*polka);
            if (known == v.known_blocks.end()) return;
            if (round == v.round && v.step == Step::prevote) {
                v.locked = known->second;
                v.locked_round = round;
                cast(v, MsgType::precommit, *polka);
                v.step = Step::precommit;
                schedule_timer(v, Step::precommit);
            } else if (v.locked && round > v.locked_round && block_hash(*v.locked) != *polka) {
                v.locked = known->second;
                v.locked_round = round;
            }
            return;
        }
        if (round == v.round && v.step == Step::prevote && tally(v.prevotes, round, std::nullopt) >= q_) {
            cast(v, MsgType::precommit, std::nullopt);
            v.step = Step::precommit;
            schedule_timer(v, Step::precommit);
        }
    }

    bool check_precommits(Validator& v, std::uint32_t round)
    {
        auto decided = quorum_value(v.precommits, round, q_);
        if (!decided) return false;
        auto known = v.known_blocks.find(*decided);
        if (known == v.known_blocks.end()) return false;
        Block block = known->second;
        commit(v, block, round);
        return true;
    }

    void commit(Validator& v, const Block& block, std::uint32_t round)
    {
        if (block.height != v.next_height()) return;
        v.app.apply_block(block);
        record(v, block, round);

        Message cert;
        cert.type = MsgType::commit_cert;
        cert.from = v.id;
        cert.height = block.height;
        cert.round = round;
        cert.block = std::make_shared<const Block>(block);
        broadcast(cert, false);

        advance(v);
    }

    void record(Validator& v, const Block& block, std::uint32_t round)
    {
        commits_.push_back({block.height, v.id, block_hash(block), v.app.last_state_root(), now_, round,
                            block.txs.size()});
    }

    // Moves to the next height and replays buffered messages for it.
    void advance(Validator& v)
    {
        ++v.epoch;
        v.reset_round_state();
        v.last_sync_request.reset();
        std::vector<Message> buffered;
        buffered.swap(v.future);
        for (auto& m : buffered) {
            if (m.height < v.next_height()) continue;
            Event e;
            e.type = EventType::deliver;
            e.node = v.id;
            e.msg = std::move(m);
            push(now_, std::move(e));
        }
        schedule_start(v, cfg_.block_interval);
    }

    // -- catch-up ---------------------------------------------------------

    void request_sync(Validator& v, std::optional<std::uint32_t> peer)
    {
        if (v.last_sync_request && now_ < *v.last_sync_request + base_timeout_) return;
        v.last_sync_request = now_;
        Message m;
        m.type = MsgType::sync_request;
        m.from = v.id;
        m.height = v.next_height();
        if (peer) send(*peer, m);
        else broadcast(m, false);
    }

    void on_sync_request(Validator& v, const Message& m)
    {
        const auto& log = v.app.blocks();
        if (m.height >= log.size()) return;
        auto blocks = std::make_shared<std::vector<Block>>(log.begin() + static_cast<std::ptrdiff_t>(m.height), log.end());
        Message reply;
        reply.type = MsgType::sync_reply;
        reply.from = v.id;
        reply.height = m.height;
        reply.blocks = std::move(blocks);
        send(m.from, reply);
    }

    void on_sync_reply(Validator& v, const Message& m)
    {
        bool progressed = false;
        for (const auto& block : *m.blocks) {
            if (block.height != v.next_height()) continue;
            if (!v.app.evaluate_block(block).ok()) break;
            v.app.apply_block(block);
            record(v, block, 0);
            progressed = true;
        }
        if (progressed) advance(v);
    }

    void help_straggler(Validator& v, std::uint32_t peer, std::uint64_t height)
    {
        if (height == 0 || height >= v.app.blocks().size()) return;
        auto key = std::make_pair(peer, height);
        if (auto it = v.helped.find(key); it != v.helped.end() && now_ < it->second + base_timeout_) return;
        v.helped[key] = now_;
        Message cert;
        cert.type = MsgType::commit_cert;
        cert.from = v.id;
        cert.height = height;
        cert.block = std::make_shared<const Block>(v.app.blocks()[height]);
        send(peer, cert);
    }

    // -- termination ------------------------------------------------------

    bool finished() const
    {
        if (pending_restarts_ > 0) return false;
        bool any_live = false;
        for (const auto& v : nodes_) {
            if (!v.live) continue;
            any_live = true;
            if (v.app.height() < cfg_.max_height) return false;
        }
        return any_live;
    }

    SimTrace finish()
    {
        SimTrace trace;
        trace.commits = std::move(commits_);
        const Validator* best = &nodes_.front();
        for (const auto& v : nodes_) {
            trace.finals.push_back({v.id, v.live, v.app.height(), v.app.last_state_root()});
            if (v.app.height() > best->app.height()) best = &v;
        }
        trace.chain = best->app.blocks();
        trace.end_tick = now_;
        trace.messages_sent = sent_;
        trace.messages_dropped = dropped_;
        return trace;
    }

    const SimConfig& cfg_;
    const std::vector<ClientCommand>& workload_;
    std::mt19937_64 rng_;
    std::size_t q_;
    std::uint64_t base_timeout_ = 1;
    std::vector<Validator> nodes_;
    std::priority_queue<Event, std::vector<Event>, EventOrder> queue_;
    std::uint64_t seq_ = 0;
    std::uint64_t now_ = 0;
    std::uint64_t sent_ = 0;
    std::uint64_t dropped_ = 0;
    std::size_t pending_restarts_ = 0;
    std::vector<CommitRecord> commits_;
};

} // namespace

SimTrace run_simulation(const SimConfig& cfg, const std::vector<ClientCommand>& workload)
{
    if (cfg.validator_count == 0) throw std::invalid_argument("validator_count must be positive");
    if (cfg.delay_min > cfg.delay_max) throw std::invalid_argument("delay_range min exceeds max");
    Network net(cfg, workload);
    return net.run();
}

} // namespace debtledger
