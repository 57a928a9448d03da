#ifndef DEBTLEDGER_STATUS_HPP
#define DEBTLEDGER_STATUS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace debtledger {

/// Rejection classes. The numeric values are part of the node's wire contract
/// and must never be renumbered.
enum class Code : std::uint32_t {
    ok = 0,
    malformed = 1,
    unknown_outpoint = 2,
    bad_signature = 3,
    value_mismatch = 4,
    replay = 5,
    unauthorized_issuer = 6,
    insufficient_funding = 7,
    unknown_debt = 8,
};

std::string_view code_name(Code code);

struct Status {
    Code code = Code::ok;
    std::string log;

    static Status success() { return {}; }
    static Status reject(Code code, std::string log) { return {code, std::move(log)}; }

    bool ok() const { return code == Code::ok; }
    explicit operator bool() const { return ok(); }
};

class LedgerError : public std::runtime_error {
public:
    LedgerError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

} // namespace debtledger

#endif
