#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mtlrpki/digest.hpp"
#include "mtlrpki/errors.hpp"

namespace mtlrpki {

enum class RungKind : std::uint8_t { object = 0, metadata = 1 };

/// One Merkle tree in a ladder. Object rungs hold power-of-two many object
/// leaves; metadata rungs are single-leaf (depth 0) and always sit after
/// every object rung.
struct Rung {
    std::uint64_t start_index = 0;
    std::uint64_t size = 0;
    Digest root{};
    RungKind kind = RungKind::object;

    bool operator==(const Rung&) const = default;
};

/// Sibling hashes from leaf level up to the rung root, for one leaf.
/// Only the per-object verification baseline uses these; the manifest-driven
/// flow rebuilds subtrees bottom-up instead.
struct AuthPath {
    std::uint64_t leaf_index = 0;
    std::vector<Digest> siblings;
    std::uint64_t rung_position = 0;

    bool operator==(const AuthPath&) const = default;
};

/// Binary decomposition of n as descending powers of two. These are the
/// object rung sizes a ladder with n leaves always has.
std::vector<std::uint64_t> rung_sizes(std::uint64_t n);

/// Folds node_hash from `leaf` up the sibling list, placing left/right by
/// the bits of the leaf index, and compares against the expected rung root.
bool verify_path(const Digest& leaf, const AuthPath& path, const Digest& expected_rung_root);

/// SHA-256 over (0x02 || leaf_count BE || rung roots in ladder order).
Digest ladder_root_from_roots(std::uint64_t leaf_count, std::span<const Digest> rung_roots);

/// An append-only Merkle tree ladder. Object leaves land in power-of-two
/// rungs that follow the binary decomposition of the leaf count: appending
/// pushes a size-1 rung and merges equal-size neighbours pairwise, so every
/// previously computed node stays valid forever. Single-leaf metadata rungs
/// (CRL, manifest) trail the object rungs and absorb refresh churn without
/// touching any object subtree.
///
/// Internal nodes are cached densely per level: the node at (level, offset)
/// covers leaves [offset << level, (offset + 1) << level) and exists exactly
/// when that span fits inside one rung, which for a binary-decomposition
/// ladder means offset < leaf_count >> level. Level 0 holds the object leaf
/// commitments themselves.
class Ladder {
public:
    /// Appends one object leaf and performs the pairwise rung merges.
    /// Returns the number of internal nodes computed (== merges performed).
    std::uint64_t append_leaf(const Digest& commitment);

    /// Appends a depth-0 metadata rung after all object rungs.
    void append_metadata_rung(const Digest& commitment);

    /// Swaps the root of an existing metadata rung in place.
    void set_metadata_rung(std::size_t slot, const Digest& commitment);

    /// Replaces an object leaf and recomputes its path to the rung root.
    /// Used by registry aggregates when a hosted child republishes.
    void update_leaf(std::uint64_t index, const Digest& commitment);

    /// The single digest a signature protects. Throws empty_ladder when the
    /// ladder has no rungs at all.
    Digest root() const;

    AuthPath auth_path(std::uint64_t index) const;

    /// Builds a full ladder in one pass: leaves first, then each level once.
    /// Node hash count is exactly n - (number of object rungs).
    static Ladder rebuild(std::span<const Digest> commitments, std::span<const Digest> metadata);

    const std::vector<Rung>& object_rungs() const { return object_rungs_; }
    const std::vector<Rung>& metadata_rungs() const { return metadata_rungs_; }
    std::vector<Digest> rung_roots() const;
    std::uint64_t leaf_count() const { return leaf_count_; }
    bool empty() const { return leaf_count_ == 0 && metadata_rungs_.empty(); }

    const Digest& leaf(std::uint64_t index) const { return node(0, index); }
    const Digest& node(std::uint64_t level, std::uint64_t offset) const;
    bool has_node(std::uint64_t level, std::uint64_t offset) const;

    /// Count of cached digests across all levels, object leaves included.
    std::uint64_t cached_node_count() const;

    /// Fingerprint over every cached node; byte-identical caches compare
    /// equal. Lets tests assert that an operation left the cache untouched.
    Digest cache_fingerprint() const;

    std::string serialize() const;
    static Ladder deserialize(std::string_view bytes);

    bool operator==(const Ladder&) const = default;

private:
    void merge_rungs();
    void refresh_metadata_offsets();

    std::vector<Rung> object_rungs_;
    std::vector<Rung> metadata_rungs_;
    std::uint64_t leaf_count_ = 0;
    std::vector<std::vector<Digest>> levels_;
};

} // namespace mtlrpki
