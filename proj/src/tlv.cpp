#include "mtlrpki/tlv.hpp"

#include <limits>

namespace mtlrpki {

void TlvWriter::put(std::uint8_t tag, std::string_view value) {
    if (value.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw Error{Errc::bad_state, "tlv value too large"};
    }
    out_.push_back(static_cast<char>(tag));
    auto len = static_cast<std::uint32_t>(value.size());
    out_.push_back(static_cast<char>((len >> 24) & 0xff));
    out_.push_back(static_cast<char>((len >> 16) & 0xff));
    out_.push_back(static_cast<char>((len >> 8) & 0xff));
    out_.push_back(static_cast<char>(len & 0xff));
    out_.append(value);
}

std::string_view TlvReader::expect(std::uint8_t tag) {
    if (pos_ + 5 > in_.size()) {
        throw Error{Errc::parse_error, "tlv: truncated header"};
    }
    auto got = static_cast<std::uint8_t>(in_[pos_]);
    if (got != tag) {
        throw Error{Errc::parse_error,
                    "tlv: expected tag " + std::to_string(int(tag)) + ", got " + std::to_string(int(got))};
    }
    std::uint32_t len = 0;
    for (int i = 1; i <= 4; ++i) {
        len = (len << 8) | static_cast<std::uint8_t>(in_[pos_ + static_cast<std::size_t>(i)]);
    }
    pos_ += 5;
    if (pos_ + len > in_.size()) {
        throw Error{Errc::parse_error, "tlv: truncated value"};
    }
    auto value = in_.substr(pos_, len);
    pos_ += len;
    return value;
}

Digest TlvReader::expect_digest(std::uint8_t tag) {
    auto v = expect(tag);
    if (v.size() != 32) {
        throw Error{Errc::parse_error, "tlv: digest field must be 32 bytes"};
    }
    Digest d;
    for (std::size_t i = 0; i < 32; ++i) {
        d.value[i] = static_cast<std::uint8_t>(v[i]);
    }
    return d;
}

bool TlvReader::peek(std::uint8_t tag) const {
    if (pos_ + 5 > in_.size()) {
        return false;
    }
    return static_cast<std::uint8_t>(in_[pos_]) == tag;
}

void TlvReader::expect_done() const {
    if (!done()) {
        throw Error{Errc::parse_error, "tlv: trailing bytes"};
    }
}

std::uint64_t TlvReader::u64_from_be_checked(std::string_view v) const {
    if (v.size() != 8) {
        throw Error{Errc::parse_error, "tlv: u64 field must be 8 bytes"};
    }
    return u64_from_be(v);
}

} // namespace mtlrpki
