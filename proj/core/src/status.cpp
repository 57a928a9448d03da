#include <debtledger/status.hpp>

namespace debtledger {

std::string_view code_name(Code code)
{
    switch (code) {
    case Code::ok: return "ok";
    case Code::malformed: return "malformed";
    case Code::unknown_outpoint: return "unknown-outpoint";
    case Code::bad_signature: return "bad-signature";
    case Code::value_mismatch: return "value-mismatch";
    case Code::replay: return "replay";
    case Code::unauthorized_issuer: return "unauthorized-issuer";
    case Code::insufficient_funding: return "insufficient-funding";
    case Code::unknown_debt: return "unknown-debt";
    }
    return "unknown";
}

} // namespace debtledger
