#ifndef DEBTLEDGER_TEST_FIXTURES_HPP
#define DEBTLEDGER_TEST_FIXTURES_HPP

#include <debtledger/debt.hpp>
#include <debtledger/genesis.hpp>
#include <debtledger/ledger.hpp>

#include <nlohmann/json.hpp>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace debtledger::test {

inline KeyPair key(std::uint8_t n)
{
    Seed seed;
    seed.data.fill(n);
    return KeyPair::from_seed(seed);
}

inline Hash32 label(std::string_view text)
{
    return sha256({reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

inline Genesis make_genesis(std::vector<PubKey> issuers, std::vector<Allocation> allocations,
                            std::size_t validators = 4)
{
    Genesis g;
    for (std::size_t i = 0; i < validators; ++i) g.validators.push_back(key(static_cast<std::uint8_t>(200 + i)).public_key());
    g.issuers = std::move(issuers);
    g.allocations = std::move(allocations);
    return g;
}

inline std::vector<Coin> coins_of(const LedgerState& state, const Hash32& owner)
{
    std::vector<Coin> coins;
    for (const auto& [point, amount] : utxos_of(state, owner)) coins.push_back({point, amount});
    return coins;
}

inline Transaction pay(const LedgerState& state, const KeyPair& from, const Hash32& to, Amount amount)
{
    return build_transfer(from, select_coins(coins_of(state, from.pubkey_hash()), amount), to, amount);
}

/// Validates then applies; fails the calling test on rejection.
inline void commit_tx(LedgerState& state, const Transaction& tx)
{
    auto s = state.validate(tx);
    if (!s) throw std::runtime_error("unexpected rejection: " + s.log);
    state.apply(tx);
}

inline nlohmann::json read_json(const std::filesystem::path& p)
{
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    return nlohmann::json::parse(in);
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& stem)
    {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0;; ++i) {
            path_ = base / (stem + "-" + std::to_string(::getpid()) + "-" + std::to_string(i));
            if (std::filesystem::create_directory(path_)) break;
        }
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace debtledger::test

#endif
