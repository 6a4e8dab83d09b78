#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "mtlrpki/digest.hpp"
#include "mtlrpki/errors.hpp"

namespace mtlrpki {

// Canonical binary framing for everything that gets hashed or cached:
// tag (1 byte) || length (4-byte big-endian) || value. Fields appear in a
// fixed order per record type, so identical logical content always
// serializes to identical bytes.

class TlvWriter {
public:
    void put(std::uint8_t tag, std::string_view value);
    void put_u64(std::uint8_t tag, std::uint64_t v) { put(tag, u64_be(v)); }
    void put_digest(std::uint8_t tag, const Digest& d) { put(tag, d.view()); }

    std::string take() { return std::move(out_); }
    const std::string& bytes() const { return out_; }

private:
    std::string out_;
};

class TlvReader {
public:
    explicit TlvReader(std::string_view data) : in_(data) {}

    /// Next field must carry `tag`; returns its value or throws parse_error.
    std::string_view expect(std::uint8_t tag);
    std::uint64_t expect_u64(std::uint8_t tag) { return u64_from_be_checked(expect(tag)); }
    Digest expect_digest(std::uint8_t tag);

    /// True when the next field carries `tag` (no consumption).
    bool peek(std::uint8_t tag) const;
    bool done() const { return pos_ == in_.size(); }
    void expect_done() const;

private:
    std::uint64_t u64_from_be_checked(std::string_view v) const;

    std::string_view in_;
    std::size_t pos_ = 0;
};

} // namespace mtlrpki
