#include "fixtures.hpp"

#include <node_server.hpp>
#include <wallet.hpp>

#include <doctest.h>

#include <sys/stat.h>

#include <sstream>

using namespace debtledger;
using namespace debtledger::test;

namespace {

struct Outcome {
    int rc = -1;
    std::string out;
    std::string err;

    /// Value of the first output line starting with `field `.
    std::string field(const std::string& name) const
    {
        std::istringstream in(out);
        for (std::string line; std::getline(in, line);)
            if (line.rfind(name + " ", 0) == 0) return line.substr(name.size() + 1);
        return {};
    }
};

/// A keystore in a temp dir and, once `serve` is called, a node on an
/// ephemeral port.
class Harness {
public:
    Harness() : dir_("debtledger-wallet"), keystore_((dir_.path() / "keys.json").string()) {}

    Outcome run(std::vector<std::string> args) const
    {
        std::vector<std::string> full{"--keystore", keystore_, "--node", url_};
        full.insert(full.end(), args.begin(), args.end());
        std::ostringstream out, err;
        int rc = wallet::run(full, out, err);
        return {rc, out.str(), err.str()};
    }

    Hash32 keygen(const std::string& name)
    {
        auto r = run({"keygen", name});
        REQUIRE(r.rc == 0);
        return *Hash32::from_hex(r.field("pubkey_hash"));
    }

    KeyPair key_of(const std::string& name) const { return wallet::Keystore(keystore_).find(name)->key; }

    void serve(const Genesis& g)
    {
        server_ = std::make_unique<node::NodeServer>(Application(g), node::NodeOptions{});
        int port = server_->bind("127.0.0.1", 0);
        REQUIRE(port > 0);
        server_->start();
        url_ = "http://127.0.0.1:" + std::to_string(port);
    }

    node::NodeServer& server() { return *server_; }
    const std::string& keystore() const { return keystore_; }

private:
    TempDir dir_;
    std::string keystore_;
    std::string url_ = "http://127.0.0.1:1";
    std::unique_ptr<node::NodeServer> server_;
};

Amount balance(node::NodeServer& s, const Hash32& who)
{
    return s.query("/balance/" + who.hex()).payload.at("balance").get<Amount>();
}

} // namespace

TEST_CASE("[cli-wallet] keygen stores named keys privately")
{
    Harness h;
    auto a = h.run({"keygen", "alice"});
    CHECK(a.rc == 0);
    CHECK(a.field("name") == "alice");
    auto pub = PubKey::from_hex(a.field("pubkey"));
    REQUIRE(pub);
    auto k = h.key_of("alice");
    CHECK(k.public_key() == *pub);
    CHECK(a.field("pubkey_hash") == k.pubkey_hash().hex());

    struct stat st {};
    REQUIRE(::stat(h.keystore().c_str(), &st) == 0);
    CHECK((st.st_mode & 0777) == 0600);

    auto dup = h.run({"keygen", "alice"});
    CHECK(dup.rc == wallet::exit_usage);
    CHECK_FALSE(dup.err.empty());
    CHECK(h.run({"keygen", "bob"}).rc == 0);
    CHECK(wallet::Keystore(h.keystore()).load().size() == 2);
}

TEST_CASE("[cli-wallet] stored keys sign and verify")
{
    Harness h;
    h.keygen("alice");
    auto k = h.key_of("alice");
    auto msg = label("message");
    auto sig = k.sign(msg.view());
    CHECK(verify_signature(k.public_key(), msg.view(), sig));
    sig.data[0] ^= 1;
    CHECK_FALSE(verify_signature(k.public_key(), msg.view(), sig));
}

TEST_CASE("[cli-wallet] a tampered keystore is refused")
{
    Harness h;
    h.keygen("alice");
    h.keygen("bob");
    auto j = read_json(h.keystore());
    j["keys"][0]["pubkey_hex"] = j["keys"][1]["pubkey_hex"];
    std::ofstream(h.keystore()) << j.dump();
    CHECK_THROWS_AS(wallet::Keystore(h.keystore()).load(), std::runtime_error);
    CHECK(h.run({"keygen", "carol"}).rc == wallet::exit_usage);
}

TEST_CASE("[cli-wallet] transfer splits an output into payment and change")
{
    Harness h;
    auto alice = h.keygen("alice");
    auto bob = h.keygen("bob");
    h.serve(make_genesis({}, {{alice, 100}}, 1));

    auto r = h.run({"transfer", "alice", "bob", "40"});
    CHECK(r.rc == 0);
    CHECK(r.field("code") == "0 ok");
    CHECK(balance(h.server(), alice) == 60);
    CHECK(balance(h.server(), bob) == 40);

    auto block = block_from_json(h.server().query("/block/1").payload);
    REQUIRE(block.txs.size() == 1);
    CHECK(tx_hash(block.txs[0]).hex() == r.field("tx_hash"));
    const auto& outs = block.txs[0].outputs;
    REQUIRE(outs.size() == 2);
    CHECK(outs[0].amount == 40);
    CHECK(outs[0].lock.pubkey_hash == bob);
    CHECK(outs[1].amount == 60);
    CHECK(outs[1].lock.pubkey_hash == alice);

    // The same transfer built directly is byte-identical.
    LedgerState state = genesis_state(make_genesis({}, {{alice, 100}}, 1));
    auto direct = pay(state, h.key_of("alice"), bob, 40);
    CHECK(canonical_encode(direct) == canonical_encode(block.txs[0]));

    auto hex_addr = h.run({"transfer", "bob", alice.hex(), "40"});
    CHECK(hex_addr.rc == 0);
    CHECK(balance(h.server(), alice) == 100);
}

TEST_CASE("[cli-wallet] node rejections exit 3 with the code")
{
    Harness h;
    auto alice = h.keygen("alice");
    auto bank = h.keygen("bank");
    h.keygen("mallory");
    h.serve(make_genesis({h.key_of("bank").public_key()}, {{alice, 100}}, 1));

    auto rogue = h.run({"issue", "mallory", alice.hex() + ":10", "--loan-type", "1"});
    CHECK(rogue.rc == wallet::exit_rejected);
    CHECK(rogue.field("code") == "6 unauthorized-issuer");
    CHECK(h.server().query("/debt/aggregate").payload == 0);

    auto broke = h.run({"transfer", "bank", "alice", "5"});
    CHECK(broke.rc == wallet::exit_rejected);
    CHECK(broke.err.find("insufficient-funding") != std::string::npos);

    auto issued = h.run({"issue", "bank", "alice:10", "--loan-type", "1"});
    REQUIRE(issued.rc == 0);
    auto odt = issued.field("odt");
    auto over = h.run({"repay", "alice", odt, "11"});
    CHECK(over.rc == wallet::exit_rejected);
    CHECK(over.err.find("value-mismatch") != std::string::npos);
    CHECK(h.server().query("/debt/aggregate").payload == 10);

    auto ghost = h.run({"repay", "alice", label("ghost").hex(), "1"});
    CHECK(ghost.rc == wallet::exit_rejected);
    CHECK(ghost.err.find("unknown-debt") != std::string::npos);
    CHECK(balance(h.server(), bank) == 0);
}

TEST_CASE("[cli-wallet] an unreachable node exits 2")
{
    Harness h;
    h.keygen("alice");
    auto r = h.run({"transfer", "alice", "alice", "1"});
    CHECK(r.rc == wallet::exit_transport);
    CHECK(h.run({"query", "status"}).rc == wallet::exit_transport);
}

TEST_CASE("[cli-wallet] usage errors exit 1")
{
    Harness h;
    auto alice = h.keygen("alice");
    h.serve(make_genesis({}, {{alice, 100}}, 1));
    CHECK(h.run({}).rc == wallet::exit_usage);
    CHECK(h.run({"fly"}).rc == wallet::exit_usage);
    CHECK(h.run({"transfer", "alice", "nobody", "1"}).rc == wallet::exit_usage);
    CHECK(h.run({"transfer", "ghost", "alice", "1"}).rc == wallet::exit_usage);
    CHECK(h.run({"transfer", "alice", "alice", "0"}).rc == wallet::exit_usage);
    CHECK(h.run({"transfer", "alice", "alice", "-4"}).rc == wallet::exit_usage);
    CHECK(h.run({"transfer", "alice", "alice", "18446744073709551616"}).rc == wallet::exit_usage);
    CHECK(h.run({"issue", "alice", "alice:5"}).rc == wallet::exit_usage);
    CHECK(h.run({"issue", "alice", "alice", "--loan-type", "1"}).rc == wallet::exit_usage);
    CHECK(h.run({"query", "nothing"}).rc == wallet::exit_usage);
    CHECK(h.run({"query", "balance"}).rc == wallet::exit_usage);
    CHECK(h.run({"repay", "alice", "beef", "1"}).rc == wallet::exit_usage);
    CHECK(balance(h.server(), alice) == 100);
}

TEST_CASE("[cli-wallet] issue, partial and full repayment, and queries")
{
    Harness h;
    auto bank = h.keygen("bank");
    auto alice = h.keygen("alice");
    auto bob = h.keygen("bob");
    h.serve(make_genesis({h.key_of("bank").public_key()}, {{alice, 50}}, 1));

    auto issued = h.run({"issue", "bank", "alice:60,bob:40", "--loan-type", "2"});
    REQUIRE(issued.rc == 0);
    auto odt = issued.field("odt");
    CHECK(h.server().query("/debt/aggregate").payload == 100);

    auto partial = h.run({"repay", "alice", odt, "30"});
    REQUIRE(partial.rc == 0);
    auto successor = partial.field("successor_odt");
    REQUIRE_FALSE(successor.empty());
    auto entry = h.server().query("/debt/entry/" + successor);
    REQUIRE(entry.ok());
    CHECK(entry.payload.at("remaining") == 70);
    CHECK(h.server().query("/debt/entry/" + odt).code == Code::unknown_debt);

    auto full = h.run({"repay", "alice", successor, "70"});
    REQUIRE(full.rc == 0);
    CHECK(full.field("successor_odt").empty());
    CHECK(h.server().query("/debt/aggregate").payload == 0);
    CHECK(balance(h.server(), bank) == 100);
    CHECK(balance(h.server(), alice) == 10);

    auto agg = h.run({"query", "aggregate"});
    CHECK(agg.rc == 0);
    CHECK(nlohmann::json::parse(agg.out) == 0);
    auto debts = h.run({"query", "debts", "bank"});
    CHECK(debts.rc == 0);
    CHECK(nlohmann::json::parse(debts.out).empty());
    auto bal = h.run({"query", "balance", "bob"});
    CHECK(nlohmann::json::parse(bal.out).at("balance") == 40);
    CHECK(h.run({"query", "block", "2"}).rc == 0);
    CHECK(h.run({"query", "block", "99"}).rc == wallet::exit_rejected);
    CHECK(h.run({"query", "entry", successor}).rc == wallet::exit_rejected);
    auto status = h.run({"query", "status"});
    CHECK(nlohmann::json::parse(status.out).at("height") == 3);
}
