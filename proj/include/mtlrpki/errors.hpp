#pragma once

#include <stdexcept>
#include <string>

namespace mtlrpki {

enum class Errc {
    duplicate_ca,
    duplicate_name,
    not_found,
    already_deleted,
    empty_ladder,
    index_out_of_range,
    not_executable,
    signing_failure,
    rate_limited,
    unknown_child,
    parse_error,
    corrupt_repo,
    bind_failure,
    transport_error,
    bad_state,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

} // namespace mtlrpki
