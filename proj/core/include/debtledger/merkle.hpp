#ifndef DEBTLEDGER_MERKLE_HPP
#define DEBTLEDGER_MERKLE_HPP

#include <debtledger/bytes.hpp>

#include <span>

namespace debtledger {

/// Binary tree over the leaves in order; an odd node is paired with itself.
/// A single leaf is its own root. Throws std::invalid_argument on no leaves.
Hash32 merkle_root(std::span<const Hash32> leaves);

} // namespace debtledger

#endif
