#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qauth {

enum class ErrorKind {
    empty_key,
    key_consumed,
    key_too_short,
    not_enough_pairs,
    channel_closed,
    malformed_message,
    insufficient_cells,
    out_of_order,
    invalid_argument,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace qauth
