#include "qauth/error.hpp"

namespace qauth {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::empty_key: return "EmptyKey";
        case ErrorKind::key_consumed: return "KeyConsumed";
        case ErrorKind::key_too_short: return "KeyTooShort";
        case ErrorKind::not_enough_pairs: return "NotEnoughPairs";
        case ErrorKind::channel_closed: return "ChannelClosed";
        case ErrorKind::malformed_message: return "MalformedMessage";
        case ErrorKind::insufficient_cells: return "InsufficientCells";
        case ErrorKind::out_of_order: return "OutOfOrder";
        case ErrorKind::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace qauth
