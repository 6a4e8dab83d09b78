#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace mtlrpki {

/// 32-byte SHA-256 output. Used for leaf commitments, internal tree nodes,
/// ladder roots and registry aggregate roots alike.
struct Digest {
    std::array<std::uint8_t, 32> value{};

    auto operator<=>(const Digest&) const = default;

    std::string_view view() const {
        return {reinterpret_cast<const char*>(value.data()), value.size()};
    }
};

std::string to_hex(const Digest& d);
Digest digest_from_hex(std::string_view hex);

/// Plain SHA-256, no domain prefix.
Digest sha256(std::string_view data);

// Domain separation prefixes. Leaf, internal-node, ladder-root and
// registry-entry hashes must never collide on identical input bytes.
inline constexpr char kLeafDomain = '\x00';
inline constexpr char kNodeDomain = '\x01';
inline constexpr char kLadderDomain = '\x02';
inline constexpr char kEntryDomain = '\x03';

/// SHA-256 over (0x00 || payload); the leaf commitment of an object.
Digest leaf_hash(std::string_view payload);

/// SHA-256 over (0x01 || left || right); order-sensitive.
Digest node_hash(const Digest& left, const Digest& right);

/// SHA-256 over (0x03 || entry bytes); registry aggregate leaf commitment.
Digest entry_hash(std::string_view entry_bytes);

/// Running totals of hash invocations by domain. Cheap atomic counters so
/// tests and the bench harness can assert exact hash-work laws.
struct HashCounts {
    std::uint64_t leaf = 0;
    std::uint64_t node = 0;
    std::uint64_t ladder = 0;
    std::uint64_t entry = 0;

    std::uint64_t total() const { return leaf + node + ladder + entry; }
    HashCounts operator-(const HashCounts& rhs) const {
        return {leaf - rhs.leaf, node - rhs.node, ladder - rhs.ladder, entry - rhs.entry};
    }
};

HashCounts hash_counts();
void reset_hash_counts();

namespace detail {
void count_ladder_hash();
}

std::string u64_be(std::uint64_t v);
std::uint64_t u64_from_be(std::string_view bytes);

} // namespace mtlrpki
