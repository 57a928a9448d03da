#include <debtledger/crypto.hpp>
#include <debtledger/transaction.hpp>

#include <cstring>
#include <limits>

namespace debtledger {

std::optional<Amount> checked_add(Amount a, Amount b)
{
    if (a > std::numeric_limits<Amount>::max() - b) return std::nullopt;
    return a + b;
}

std::string_view kind_name(TxKind kind)
{
    switch (kind) {
    case TxKind::normal: return "normal";
    case TxKind::coinbase: return "coinbase";
    case TxKind::debt: return "debt";
    case TxKind::outstanding_debt: return "outstanding_debt";
    }
    return "unknown";
}

namespace {

class Writer {
public:
    explicit Writer(Bytes& out) : out_(out) {}

    template <typename T>
    void put_le(T value) { append_le(out_, value); }

    void put(ByteView bytes) { append(out_, bytes); }

    void put_count(std::size_t n)
    {
        if (n > kMaxListEntries) throw LedgerError(Code::malformed, "list exceeds 2^16 entries");
        put_le(static_cast<std::uint32_t>(n));
    }

private:
    Bytes& out_;
};

class Reader {
public:
    explicit Reader(ByteView in) : in_(in) {}

    template <typename T>
    T get_le()
    {
        using U = std::make_unsigned_t<T>;
        need(sizeof(U));
        U u = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) u |= static_cast<U>(static_cast<U>(in_[pos_ + i]) << (8 * i));
        pos_ += sizeof(U);
        return static_cast<T>(u);
    }

    template <std::size_t N, typename Tag>
    void get(FixedBytes<N, Tag>& out)
    {
        need(N);
        std::memcpy(out.data.data(), in_.data() + pos_, N);
        pos_ += N;
    }

    std::size_t get_count(std::size_t min_entry_size)
    {
        auto n = get_le<std::uint32_t>();
        if (n > kMaxListEntries) throw LedgerError(Code::malformed, "list exceeds 2^16 entries");
        if (static_cast<std::size_t>(n) * min_entry_size > remaining())
            throw LedgerError(Code::malformed, "list count exceeds payload");
        return n;
    }

    std::size_t remaining() const { return in_.size() - pos_; }

private:
    void need(std::size_t n) const
    {
        if (remaining() < n) throw LedgerError(Code::malformed, "truncated transaction");
    }

    ByteView in_;
    std::size_t pos_ = 0;
};

constexpr std::size_t kEncodedInputSize = 32 + 4 + 32 + 64;
constexpr std::size_t kEncodedOutputSize = 8 + 32;

void encode_into(Bytes& out, const Transaction& tx, bool strip_unlock)
{
    Writer w(out);
    w.put_le(tx.version);
    w.put_le(static_cast<std::uint8_t>(tx.kind));
    w.put_count(tx.inputs.size());
    static const PubKey zero_key{};
    static const Signature zero_sig{};
    for (const auto& in : tx.inputs) {
        w.put(in.prev_field.view());
        w.put_le(in.output_index);
        w.put(strip_unlock ? zero_key.view() : in.unlock_pubkey.view());
        w.put(strip_unlock ? zero_sig.view() : in.unlock_sig.view());
    }
    w.put_count(tx.outputs.size());
    for (const auto& o : tx.outputs) {
        w.put_le(o.amount);
        w.put(o.lock.pubkey_hash.view());
    }
    w.put_le(tx.locktime);
    w.put_le(tx.loan_type);
    w.put(tx.debt_ref.view());
}

} // namespace

Bytes canonical_encode(const Transaction& tx)
{
    Bytes out;
    out.reserve(2 + 1 + 8 + tx.inputs.size() * kEncodedInputSize + tx.outputs.size() * kEncodedOutputSize + 38);
    encode_into(out, tx, false);
    return out;
}

Transaction canonical_decode(ByteView bytes)
{
    Reader r(bytes);
    Transaction tx;
    tx.version = r.get_le<std::uint16_t>();
    auto tag = r.get_le<std::uint8_t>();
    if (tag > static_cast<std::uint8_t>(TxKind::outstanding_debt))
        throw LedgerError(Code::malformed, "unknown kind tag");
    tx.kind = static_cast<TxKind>(tag);

    tx.inputs.resize(r.get_count(kEncodedInputSize));
    for (auto& in : tx.inputs) {
        r.get(in.prev_field);
        in.output_index = r.get_le<std::int32_t>();
        r.get(in.unlock_pubkey);
        r.get(in.unlock_sig);
    }
    tx.outputs.resize(r.get_count(kEncodedOutputSize));
    for (auto& o : tx.outputs) {
        o.amount = r.get_le<std::uint64_t>();
        r.get(o.lock.pubkey_hash);
    }
    tx.locktime = r.get_le<std::uint32_t>();
    tx.loan_type = r.get_le<std::uint16_t>();
    r.get(tx.debt_ref);
    if (r.remaining() != 0) throw LedgerError(Code::malformed, "trailing bytes after transaction");
    return tx;
}

Hash32 tx_hash(const Transaction& tx)
{
    return sha256(canonical_encode(tx));
}

Hash32 sighash(const Transaction& tx)
{
    Bytes out;
    encode_into(out, tx, true);
    return sha256(out);
}

Transaction sign_input(Transaction tx, std::size_t input_index, const KeyPair& key)
{
    if (input_index >= tx.inputs.size()) throw std::out_of_range("sign_input: input index out of range");
    auto digest = sighash(tx);
    tx.inputs[input_index].unlock_pubkey = key.public_key();
    tx.inputs[input_index].unlock_sig = key.sign(digest.view());
    return tx;
}

bool verify_unlock(const LockingCondition& lock, const TxInput& input, const Hash32& digest)
{
    if (pubkey_hash(input.unlock_pubkey) != lock.pubkey_hash) return false;
    return verify_signature(input.unlock_pubkey, digest.view(), input.unlock_sig);
}

TxKind classify(const Transaction& tx)
{
    if (tx.inputs.empty()) throw LedgerError(Code::malformed, "transaction has no inputs");

    std::optional<TxKind> sentinel_kind;
    bool any_normal = false;
    for (const auto& in : tx.inputs) {
        switch (in.output_index) {
        case kCoinbaseIndex: sentinel_kind = TxKind::coinbase; break;
        case kDebtIndex: sentinel_kind = TxKind::debt; break;
        case kOutstandingDebtIndex: sentinel_kind = TxKind::outstanding_debt; break;
        default:
            if (in.output_index < 0) throw LedgerError(Code::malformed, "unknown input sentinel");
            any_normal = true;
        }
    }

    TxKind kind = TxKind::normal;
    if (sentinel_kind) {
        if (any_normal || tx.inputs.size() != 1)
            throw LedgerError(Code::malformed, "sentinel input must be the only input");
        kind = *sentinel_kind;
    }
    if (kind != tx.kind) throw LedgerError(Code::malformed, "kind tag disagrees with inputs");
    return kind;
}

Amount output_total(const Transaction& tx)
{
    Amount total = 0;
    for (const auto& o : tx.outputs) {
        auto sum = checked_add(total, o.amount);
        if (!sum) throw LedgerError(Code::value_mismatch, "output amounts overflow");
        total = *sum;
    }
    return total;
}

Status check_structure(const Transaction& tx)
{
    if (tx.version != kTxVersion) return Status::reject(Code::malformed, "unsupported version");
    if (tx.locktime != 0) return Status::reject(Code::malformed, "locktime must be zero");
    if (tx.inputs.size() > kMaxListEntries || tx.outputs.size() > kMaxListEntries)
        return Status::reject(Code::malformed, "too many list entries");

    TxKind kind;
    try {
        kind = classify(tx);
    } catch (const LedgerError& e) {
        return Status::reject(e.code(), e.what());
    }

    if (tx.outputs.empty()) return Status::reject(Code::malformed, "transaction has no outputs");
    for (const auto& o : tx.outputs)
        if (o.amount == 0) return Status::reject(Code::malformed, "zero-value output");
    try {
        output_total(tx);
    } catch (const LedgerError& e) {
        return Status::reject(e.code(), e.what());
    }

    switch (kind) {
    case TxKind::coinbase:
        if (!tx.debt_ref.is_zero()) return Status::reject(Code::malformed, "coinbase carries a debt reference");
        break;
    case TxKind::debt: {
        const auto& in = tx.inputs.front();
        if (PubKey::from(in.prev_field) != in.unlock_pubkey)
            return Status::reject(Code::malformed, "debt input key field disagrees with unlocking key");
        if (tx.loan_type == 0) return Status::reject(Code::malformed, "debt transaction without loan type");
        if (!tx.debt_ref.is_zero()) return Status::reject(Code::malformed, "debt transaction carries a debt reference");
        break;
    }
    case TxKind::outstanding_debt:
        if (tx.outputs.size() != 1)
            return Status::reject(Code::malformed, "outstanding debt transaction needs exactly one output");
        if (tx.debt_ref.is_zero())
            return Status::reject(Code::malformed, "outstanding debt transaction without debt reference");
        break;
    case TxKind::normal:
        if (is_repayment(tx) && tx.outputs.size() > 2)
            return Status::reject(Code::malformed, "repayment has at most a payment and a change output");
        break;
    }
    return Status::success();
}

} // namespace debtledger
