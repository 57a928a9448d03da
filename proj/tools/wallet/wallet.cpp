#include "wallet.hpp"

#include <debtledger/debt.hpp>

#include <CLI11.hpp>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace debtledger::wallet {

namespace {

// Holds an exclusive or shared flock for its lifetime.
class FileLock {
public:
    FileLock(const std::filesystem::path& path, bool exclusive)
    {
        fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0600);
        if (fd_ < 0) throw std::runtime_error("cannot open lock file " + path.string());
        if (::flock(fd_, exclusive ? LOCK_EX : LOCK_SH) != 0) {
            ::close(fd_);
            throw std::runtime_error("cannot lock " + path.string());
        }
    }
    ~FileLock()
    {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

std::filesystem::path lock_path(const std::filesystem::path& p)
{
    return p.string() + ".lock";
}

std::vector<KeyEntry> read_keys(const std::filesystem::path& path)
{
    std::vector<KeyEntry> keys;
    if (!std::filesystem::exists(path)) return keys;
    std::ifstream in(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
        for (const auto& k : j.at("keys")) {
            auto name = k.at("name").get<std::string>();
            auto seed = Seed::from_hex(k.at("secret_hex").get<std::string>());
            if (!seed) throw std::runtime_error("key '" + name + "' has a malformed secret");
            auto key = KeyPair::from_seed(*seed);
            if (key.public_key().hex() != k.at("pubkey_hex").get<std::string>())
                throw std::runtime_error("key '" + name + "' does not match its stored public key");
            keys.push_back({std::move(name), key});
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("keystore " + path.string() + " is malformed: " + e.what());
    }
    return keys;
}

void write_keys(const std::filesystem::path& path, const std::vector<KeyEntry>& keys)
{
    nlohmann::json list = nlohmann::json::array();
    for (const auto& k : keys)
        list.push_back({{"name", k.name}, {"pubkey_hex", k.key.public_key().hex()}, {"secret_hex", k.key.seed().hex()}});
    std::string text = nlohmann::json{{"keys", list}}.dump(2) + "\n";

    auto tmp = path.string() + ".tmp";
    int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0600);
    if (fd < 0) throw std::runtime_error("cannot write " + tmp);
    std::size_t done = 0;
    while (done < text.size()) {
        auto n = ::write(fd, text.data() + done, text.size() - done);
        if (n <= 0) {
            ::close(fd);
            throw std::runtime_error("short write to " + tmp);
        }
        done += static_cast<std::size_t>(n);
    }
    ::fsync(fd);
    ::close(fd);
    std::filesystem::rename(tmp, path);
}

struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Client-side refusal carrying the registry code it corresponds to.
struct Rejection : std::runtime_error {
    Rejection(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
    Code code;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NodeReply {
    Code code = Code::ok;
    nlohmann::json payload;
    std::string log;
};

class NodeClient {
public:
    explicit NodeClient(const std::string& url) : client_(url)
    {
        if (!client_.is_valid()) throw UsageError("invalid node URL " + url);
        client_.set_connection_timeout(std::chrono::seconds(3));
        client_.set_read_timeout(std::chrono::seconds(15));
    }

    NodeReply get(const std::string& path) { return decode(client_.Get(path)); }
    NodeReply post_tx(const Transaction& tx) { return decode(client_.Post("/tx", to_hex(canonical_encode(tx)), "text/plain")); }

private:
    static NodeReply decode(const httplib::Result& res)
    {
        if (!res) throw TransportError("node unreachable: " + httplib::to_string(res.error()));
        try {
            auto j = nlohmann::json::parse(res->body);
            NodeReply r;
            r.code = static_cast<Code>(j.at("code").get<std::uint32_t>());
            r.payload = j.value("payload", nlohmann::json());
            r.log = j.value("log", "");
            return r;
        } catch (const nlohmann::json::exception& e) {
            throw TransportError("node sent an unreadable response (HTTP " + std::to_string(res->status) + ")");
        }
    }

    httplib::Client client_;
};

std::string env_or(const char* name, std::string fallback)
{
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : std::move(fallback);
}

Hash32 parse_hash(const std::string& text, const char* what)
{
    auto h = Hash32::from_hex(text);
    if (!h) throw UsageError(std::string(what) + " must be 64 hex characters");
    return *h;
}

// A pubkey hash given in hex, or the name of a keystore entry.
Hash32 resolve_address(const Keystore& ks, const std::string& text)
{
    if (auto h = Hash32::from_hex(text)) return *h;
    if (auto k = ks.find(text)) return k->key.pubkey_hash();
    throw UsageError("'" + text + "' is neither a 64-hex pubkey hash nor a keystore name");
}

KeyPair require_key(const Keystore& ks, const std::string& name)
{
    auto k = ks.find(name);
    if (!k) throw UsageError("no key named '" + name + "' in " + ks.path().string());
    return k->key;
}

Amount parse_amount(const std::string& text)
{
    Amount v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || v == 0)
        throw UsageError("amount '" + text + "' must be a positive integer");
    return v;
}

std::vector<Coin> fetch_coins(NodeClient& node, const Hash32& owner)
{
    auto r = node.get("/balance/" + owner.hex());
    if (r.code != Code::ok) throw Rejection(r.code, "balance query failed: " + r.log);
    std::vector<Coin> coins;
    for (const auto& u : r.payload.at("utxos")) {
        auto hash = Hash32::from_hex(u.at("tx_hash").get<std::string>());
        if (!hash) throw TransportError("node returned a malformed outpoint");
        coins.push_back({{*hash, u.at("index").get<std::uint32_t>()}, u.at("amount").get<Amount>()});
    }
    return coins;
}

std::vector<Coin> fund(NodeClient& node, const KeyPair& payer, Amount amount)
{
    auto coins = fetch_coins(node, payer.pubkey_hash());
    try {
        return select_coins(coins, amount);
    } catch (const LedgerError& e) {
        throw Rejection(e.code(), e.what());
    }
}

int report_submission(NodeClient& node, const Transaction& tx, std::ostream& out, std::ostream& err)
{
    auto r = node.post_tx(tx);
    out << "tx_hash " << tx_hash(tx).hex() << '\n';
    out << "code " << static_cast<int>(r.code) << ' ' << code_name(r.code) << '\n';
    if (r.code != Code::ok) {
        err << "rejected: " << r.log << '\n';
        return exit_rejected;
    }
    return exit_ok;
}

std::vector<DebtorOutput> parse_recipients(const Keystore& ks, const std::string& list)
{
    std::vector<DebtorOutput> outs;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.rfind(':');
        if (colon == std::string::npos) throw UsageError("recipient '" + item + "' must be <hash>:<amount>");
        outs.push_back({resolve_address(ks, item.substr(0, colon)), parse_amount(item.substr(colon + 1))});
    }
    if (outs.empty()) throw UsageError("issue needs at least one recipient");
    return outs;
}

} // namespace

std::vector<KeyEntry> Keystore::load() const
{
    FileLock lock(lock_path(path_), false);
    return read_keys(path_);
}

std::optional<KeyEntry> Keystore::find(const std::string& name) const
{
    for (auto& k : load())
        if (k.name == name) return k;
    return std::nullopt;
}

KeyEntry Keystore::create(const std::string& name) const
{
    if (name.empty()) throw std::runtime_error("key name must not be empty");
    FileLock lock(lock_path(path_), true);
    auto keys = read_keys(path_);
    for (const auto& k : keys)
        if (k.name == name) throw std::runtime_error("a key named '" + name + "' already exists");
    keys.push_back({name, KeyPair::generate()});
    write_keys(path_, keys);
    return keys.back();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"debt ledger wallet"};
    app.name("wallet");
    app.require_subcommand(1);
    std::string node_url = env_or("DEBTLEDGER_NODE", "http://127.0.0.1:26657");
    std::string keystore_path = env_or("DEBTLEDGER_KEYSTORE", "keystore.json");
    app.add_option("--node", node_url, "node base URL")->capture_default_str();
    app.add_option("--keystore", keystore_path, "keystore JSON file (plaintext secrets)")->capture_default_str();

    std::string name, from, to, amount_text, recipients, odt_text, what;
    std::vector<std::string> query_args;
    std::uint16_t loan_type = 0;

    auto* keygen = app.add_subcommand("keygen", "create a named key pair");
    keygen->add_option("name", name)->required();

    auto* transfer = app.add_subcommand("transfer", "pay an address from a key's outputs");
    transfer->add_option("from", from, "key name")->required();
    transfer->add_option("to", to, "recipient pubkey hash (or key name)")->required();
    transfer->add_option("amount", amount_text)->required();

    auto* issue = app.add_subcommand("issue", "issue debt as a permissioned issuer");
    issue->add_option("issuer", from, "issuer key name")->required();
    issue->add_option("recipients", recipients, "<hash>:<amount>[,<hash>:<amount>...]")->required();
    issue->add_option("--loan-type", loan_type, "non-zero loan type tag")->required();

    auto* repay = app.add_subcommand("repay", "repay an outstanding debt; full when amount equals the remainder");
    repay->add_option("payer", from, "payer key name")->required();
    repay->add_option("odt_hash", odt_text, "outstanding debt transaction hash")->required();
    repay->add_option("amount", amount_text)->required();

    auto* query = app.add_subcommand("query", "balance <addr> | aggregate | debts <addr> | status | block <n> | entry <odt>");
    query->add_option("what", what)->required()->check(
        CLI::IsMember({"balance", "aggregate", "debts", "status", "block", "entry"}));
    query->add_option("args", query_args);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    Keystore ks(keystore_path);
    try {
        if (keygen->parsed()) {
            auto k = ks.create(name);
            out << "name " << k.name << '\n';
            out << "pubkey " << k.key.public_key().hex() << '\n';
            out << "pubkey_hash " << k.key.pubkey_hash().hex() << '\n';
            return exit_ok;
        }

        NodeClient node(node_url);
        if (transfer->parsed()) {
            auto key = require_key(ks, from);
            auto dest = resolve_address(ks, to);
            auto amount = parse_amount(amount_text);
            auto coins = fund(node, key, amount);
            return report_submission(node, build_transfer(key, coins, dest, amount), out, err);
        }
        if (issue->parsed()) {
            IssuanceRequest req{require_key(ks, from), parse_recipients(ks, recipients), loan_type};
            IssuedDebt issued;
            try {
                issued = build_issuance(req);
            } catch (const LedgerError& e) {
                throw UsageError(e.what());
            }
            int rc = report_submission(node, issued.debt_tx, out, err);
            if (rc == exit_ok) out << "odt " << tx_hash(issued.odt).hex() << '\n';
            return rc;
        }
        if (repay->parsed()) {
            auto key = require_key(ks, from);
            auto odt = parse_hash(odt_text, "odt_hash");
            auto amount = parse_amount(amount_text);
            auto r = node.get("/debt/entry/" + odt.hex());
            if (r.code != Code::ok) throw Rejection(r.code, r.log);
            OutstandingDebtEntry entry;
            entry.odt_hash = odt;
            entry.creditor_lock.pubkey_hash = parse_hash(r.payload.at("creditor").get<std::string>(), "creditor");
            entry.remaining = r.payload.at("remaining").get<Amount>();
            entry.debt_origin = parse_hash(r.payload.at("debt_origin").get<std::string>(), "debt_origin");
            entry.loan_type = r.payload.at("loan_type").get<std::uint16_t>();
            if (amount > entry.remaining)
                throw Rejection(Code::value_mismatch,
                                "amount exceeds the remaining " + std::to_string(entry.remaining));

            auto coins = fund(node, key, amount);
            if (amount == entry.remaining) return report_submission(node, build_repay_full(entry, key, coins), out, err);
            auto partial = build_repay_partial(entry, key, amount, coins);
            int rc = report_submission(node, partial.payment_tx, out, err);
            if (rc == exit_ok) out << "successor_odt " << tx_hash(partial.new_odt).hex() << '\n';
            return rc;
        }
        if (query->parsed()) {
            auto need = [&](std::size_t n) {
                if (query_args.size() != n)
                    throw UsageError("query " + what + " takes " + std::to_string(n) + " argument(s)");
            };
            std::string path;
            if (what == "balance") {
                need(1);
                path = "/balance/" + resolve_address(ks, query_args[0]).hex();
            } else if (what == "debts") {
                need(1);
                path = "/debt/creditor/" + resolve_address(ks, query_args[0]).hex();
            } else if (what == "aggregate") {
                need(0);
                path = "/debt/aggregate";
            } else if (what == "status") {
                need(0);
                path = "/status";
            } else if (what == "block") {
                need(1);
                path = "/block/" + query_args[0];
            } else {
                need(1);
                path = "/debt/entry/" + parse_hash(query_args[0], "odt_hash").hex();
            }
            auto r = node.get(path);
            if (r.code != Code::ok) {
                err << "code " << static_cast<int>(r.code) << ' ' << code_name(r.code) << ": " << r.log << '\n';
                return exit_rejected;
            }
            out << r.payload.dump(2) << '\n';
            return exit_ok;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const TransportError& e) {
        err << "error: " << e.what() << '\n';
        return exit_transport;
    } catch (const Rejection& e) {
        err << "rejected (code " << static_cast<int>(e.code) << ' ' << code_name(e.code) << "): " << e.what() << '\n';
        return exit_rejected;
    } catch (const LedgerError& e) {
        err << "rejected (code " << static_cast<int>(e.code()) << ' ' << code_name(e.code()) << "): " << e.what() << '\n';
        return exit_rejected;
    } catch (const nlohmann::json::exception& e) {
        err << "error: unexpected node payload: " << e.what() << '\n';
        return exit_transport;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

} // namespace debtledger::wallet
