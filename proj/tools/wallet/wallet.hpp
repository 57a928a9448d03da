#ifndef DEBTLEDGER_WALLET_HPP
#define DEBTLEDGER_WALLET_HPP

#include <debtledger/crypto.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace debtledger::wallet {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_transport = 2, exit_rejected = 3 };

struct KeyEntry {
    std::string name;
    KeyPair key;
};

/// Named Ed25519 keys in a plaintext JSON file:
///   {"keys": [{"name", "pubkey_hex", "secret_hex"}]}
/// secret_hex is the 32-byte seed. The file is created mode 0600 and
/// rewritten atomically under an advisory lock on "<path>.lock".
class Keystore {
public:
    explicit Keystore(std::filesystem::path path) : path_(std::move(path)) {}

    const std::filesystem::path& path() const { return path_; }

    /// Throws std::runtime_error on unreadable or inconsistent files.
    std::vector<KeyEntry> load() const;
    std::optional<KeyEntry> find(const std::string& name) const;
    /// Generates and stores a new key. Throws std::runtime_error if the name
    /// is taken or empty.
    KeyEntry create(const std::string& name) const;

private:
    std::filesystem::path path_;
};

/// Runs one wallet command. args excludes the program name. Returns the
/// process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace debtledger::wallet

#endif
