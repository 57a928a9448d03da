#ifndef DEBTLEDGER_CRYPTO_HPP
#define DEBTLEDGER_CRYPTO_HPP

#include <debtledger/bytes.hpp>

#include <array>

namespace debtledger {

Hash32 sha256(ByteView data);

using Seed = FixedBytes<32, struct SeedTag>;

/// Deterministic Ed25519 key pair. Only the 32-byte seed is secret material
/// that needs storing; the expanded key is rebuilt on construction.
class KeyPair {
public:
    static KeyPair generate();
    static KeyPair from_seed(const Seed& seed);

    const PubKey& public_key() const { return public_; }
    const Seed& seed() const { return seed_; }
    Hash32 pubkey_hash() const;

    Signature sign(ByteView message) const;

private:
    KeyPair() = default;

    Seed seed_;
    PubKey public_;
    std::array<std::uint8_t, 64> expanded_{};
};

bool verify_signature(const PubKey& key, ByteView message, const Signature& sig);

/// SHA-256 of the raw public key; the address an output is locked to.
Hash32 pubkey_hash(const PubKey& key);

} // namespace debtledger

#endif
