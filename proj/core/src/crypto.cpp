#include <debtledger/crypto.hpp>

#include <sodium.h>

#include <mutex>
#include <stdexcept>

namespace debtledger {

namespace {

void ensure_sodium()
{
    static std::once_flag once;
    std::call_once(once, [] {
        if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
    });
}

} // namespace

Hash32 sha256(ByteView data)
{
    ensure_sodium();
    Hash32 out;
    crypto_hash_sha256(out.data.data(), data.data(), data.size());
    return out;
}

KeyPair KeyPair::generate()
{
    ensure_sodium();
    Seed seed;
    randombytes_buf(seed.data.data(), seed.data.size());
    return from_seed(seed);
}

KeyPair KeyPair::from_seed(const Seed& seed)
{
    ensure_sodium();
    static_assert(crypto_sign_SEEDBYTES == 32 && crypto_sign_PUBLICKEYBYTES == 32);
    static_assert(crypto_sign_SECRETKEYBYTES == 64 && crypto_sign_BYTES == 64);
    KeyPair kp;
    kp.seed_ = seed;
    crypto_sign_seed_keypair(kp.public_.data.data(), kp.expanded_.data(), seed.data.data());
    return kp;
}

Hash32 KeyPair::pubkey_hash() const
{
    return debtledger::pubkey_hash(public_);
}

Signature KeyPair::sign(ByteView message) const
{
    Signature sig;
    crypto_sign_detached(sig.data.data(), nullptr, message.data(), message.size(), expanded_.data());
    return sig;
}

bool verify_signature(const PubKey& key, ByteView message, const Signature& sig)
{
    ensure_sodium();
    return crypto_sign_verify_detached(sig.data.data(), message.data(), message.size(),
                                       key.data.data()) == 0;
}

Hash32 pubkey_hash(const PubKey& key)
{
    return sha256(key.view());
}

} // namespace debtledger
