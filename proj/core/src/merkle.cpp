#include <debtledger/crypto.hpp>
#include <debtledger/merkle.hpp>

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace debtledger {

Hash32 merkle_root(std::span<const Hash32> leaves)
{
    if (leaves.empty()) throw std::invalid_argument("merkle_root of an empty list");

    std::vector<Hash32> level(leaves.begin(), leaves.end());
    std::array<std::uint8_t, 64> pair{};
    while (level.size() > 1) {
        std::vector<Hash32> next;
        next.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i < level.size(); i += 2) {
            const Hash32& left = level[i];
            const Hash32& right = i + 1 < level.size() ? level[i + 1] : level[i];
            std::copy(left.data.begin(), left.data.end(), pair.begin());
            std::copy(right.data.begin(), right.data.end(), pair.begin() + 32);
            next.push_back(sha256(pair));
        }
        level = std::move(next);
    }
    return level.front();
}

} // namespace debtledger
