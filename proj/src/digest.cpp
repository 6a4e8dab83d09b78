#include "mtlrpki/digest.hpp"

#include <atomic>
#include <stdexcept>

#include <openssl/sha.h>

namespace mtlrpki {

namespace {

struct Counters {
    std::atomic<std::uint64_t> leaf{0};
    std::atomic<std::uint64_t> node{0};
    std::atomic<std::uint64_t> ladder{0};
    std::atomic<std::uint64_t> entry{0};
};

Counters& counters() {
    static Counters c;
    return c;
}

} // namespace

HashCounts hash_counts() {
    auto& c = counters();
    return {c.leaf.load(), c.node.load(), c.ladder.load(), c.entry.load()};
}

void reset_hash_counts() {
    auto& c = counters();
    c.leaf = 0;
    c.node = 0;
    c.ladder = 0;
    c.entry = 0;
}

void detail::count_ladder_hash() {
    counters().ladder.fetch_add(1, std::memory_order_relaxed);
}

Digest sha256(std::string_view data) {
    Digest out;
    SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), out.value.data());
    return out;
}

Digest leaf_hash(std::string_view payload) {
    counters().leaf.fetch_add(1, std::memory_order_relaxed);
    std::string buf;
    buf.reserve(1 + payload.size());
    buf.push_back(kLeafDomain);
    buf.append(payload);
    return sha256(buf);
}

Digest node_hash(const Digest& left, const Digest& right) {
    counters().node.fetch_add(1, std::memory_order_relaxed);
    std::string buf;
    buf.reserve(65);
    buf.push_back(kNodeDomain);
    buf.append(left.view());
    buf.append(right.view());
    return sha256(buf);
}

Digest entry_hash(std::string_view entry_bytes) {
    counters().entry.fetch_add(1, std::memory_order_relaxed);
    std::string buf;
    buf.reserve(1 + entry_bytes.size());
    buf.push_back(kEntryDomain);
    buf.append(entry_bytes);
    return sha256(buf);
}

std::string to_hex(const Digest& d) {
    static const char* hexdig = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (auto b : d.value) {
        out.push_back(hexdig[b >> 4]);
        out.push_back(hexdig[b & 0x0f]);
    }
    return out;
}

namespace {
int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
} // namespace

Digest digest_from_hex(std::string_view hex) {
    if (hex.size() != 64) {
        throw std::invalid_argument{"digest hex must be 64 characters"};
    }
    Digest d;
    for (std::size_t i = 0; i < 32; ++i) {
        int hi = hex_nibble(hex[2 * i]);
        int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) {
            throw std::invalid_argument{"bad hex digit in digest"};
        }
        d.value[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return d;
}

std::string u64_be(std::uint64_t v) {
    std::string out(8, '\0');
    for (int i = 7; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = static_cast<char>(v & 0xff);
        v >>= 8;
    }
    return out;
}

std::uint64_t u64_from_be(std::string_view bytes) {
    if (bytes.size() != 8) {
        throw std::invalid_argument{"u64 field must be 8 bytes"};
    }
    std::uint64_t v = 0;
    for (char c : bytes) {
        v = (v << 8) | static_cast<std::uint8_t>(c);
    }
    return v;
}

} // namespace mtlrpki
