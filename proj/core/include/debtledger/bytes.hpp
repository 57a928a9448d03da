#ifndef DEBTLEDGER_BYTES_HPP
#define DEBTLEDGER_BYTES_HPP

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace debtledger {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView bytes);

template <typename T>
void append_le(Bytes& out, T value)
{
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
}

inline void append(Bytes& out, ByteView bytes)
{
    out.insert(out.end(), bytes.begin(), bytes.end());
}

/// Lower- or upper-case hex, even length. Returns nullopt on any other input.
std::optional<Bytes> from_hex(std::string_view hex);

/// Fixed-width byte string. The tag keeps hashes, keys and signatures apart.
template <std::size_t N, typename Tag>
struct FixedBytes {
    std::array<std::uint8_t, N> data{};

    static constexpr std::size_t size() { return N; }

    bool is_zero() const
    {
        return std::all_of(data.begin(), data.end(), [](std::uint8_t b) { return b == 0; });
    }

    ByteView view() const { return {data.data(), N}; }
    std::string hex() const { return to_hex(view()); }

    static std::optional<FixedBytes> from_hex(std::string_view hex)
    {
        auto raw = debtledger::from_hex(hex);
        if (!raw || raw->size() != N) return std::nullopt;
        FixedBytes out;
        std::copy(raw->begin(), raw->end(), out.data.begin());
        return out;
    }

    template <typename OtherTag>
    static FixedBytes from(const FixedBytes<N, OtherTag>& other)
    {
        return FixedBytes{other.data};
    }

    auto operator<=>(const FixedBytes&) const = default;
    bool operator==(const FixedBytes&) const = default;
};

using Hash32 = FixedBytes<32, struct Hash32Tag>;
using PubKey = FixedBytes<32, struct PubKeyTag>;
using Signature = FixedBytes<64, struct SignatureTag>;

struct FixedBytesHash {
    template <std::size_t N, typename Tag>
    std::size_t operator()(const FixedBytes<N, Tag>& b) const noexcept
    {
        std::size_t h = 0;
        for (std::size_t i = 0; i < sizeof(std::size_t) && i < N; ++i) h = (h << 8) | b.data[i];
        return h;
    }
};

} // namespace debtledger

#endif
