#include "mtlrpki/mtl.hpp"

#include <algorithm>
#include <bit>

#include "mtlrpki/tlv.hpp"

namespace mtlrpki {

std::vector<std::uint64_t> rung_sizes(std::uint64_t n) {
    std::vector<std::uint64_t> sizes;
    for (int bit = 63; bit >= 0; --bit) {
        const std::uint64_t p = std::uint64_t{1} << bit;
        if (n & p) {
            sizes.push_back(p);
        }
    }
    return sizes;
}

bool verify_path(const Digest& leaf, const AuthPath& path, const Digest& expected_rung_root) {
    Digest acc = leaf;
    for (std::size_t level = 0; level < path.siblings.size(); ++level) {
        const bool right_child = (path.leaf_index >> level) & 1;
        acc = right_child ? node_hash(path.siblings[level], acc) : node_hash(acc, path.siblings[level]);
    }
    return acc == expected_rung_root;
}

Digest ladder_root_from_roots(std::uint64_t leaf_count, std::span<const Digest> rung_roots) {
    detail::count_ladder_hash();
    std::string buf;
    buf.reserve(9 + 32 * rung_roots.size());
    buf.push_back(kLadderDomain);
    buf.append(u64_be(leaf_count));
    for (const auto& r : rung_roots) {
        buf.append(r.view());
    }
    return sha256(buf);
}

std::uint64_t Ladder::append_leaf(const Digest& commitment) {
    if (levels_.empty()) {
        levels_.emplace_back();
    }
    levels_[0].push_back(commitment);
    object_rungs_.push_back(Rung{leaf_count_, 1, commitment, RungKind::object});
    ++leaf_count_;

    std::uint64_t merges = 0;
    while (object_rungs_.size() >= 2) {
        Rung& left = object_rungs_[object_rungs_.size() - 2];
        Rung& right = object_rungs_.back();
        if (left.size != right.size) {
            break;
        }
        const Digest parent = node_hash(left.root, right.root);
        ++merges;
        const std::uint64_t parent_level = std::countr_zero(left.size) + 1;
        if (levels_.size() <= parent_level) {
            levels_.emplace_back();
        }
        // Parent offset is always the next free slot at its level: all
        // smaller offsets were filled when earlier subtrees completed.
        levels_[parent_level].push_back(parent);
        left.size *= 2;
        left.root = parent;
        object_rungs_.pop_back();
    }
    refresh_metadata_offsets();
    return merges;
}

void Ladder::append_metadata_rung(const Digest& commitment) {
    const std::uint64_t start = leaf_count_ + metadata_rungs_.size();
    metadata_rungs_.push_back(Rung{start, 1, commitment, RungKind::metadata});
}

void Ladder::set_metadata_rung(std::size_t slot, const Digest& commitment) {
    if (slot >= metadata_rungs_.size()) {
        throw Error{Errc::index_out_of_range, "metadata slot out of range"};
    }
    metadata_rungs_[slot].root = commitment;
}

void Ladder::update_leaf(std::uint64_t index, const Digest& commitment) {
    if (index >= leaf_count_) {
        throw Error{Errc::index_out_of_range, "leaf index out of range"};
    }
    levels_[0][index] = commitment;

    auto rung = std::find_if(object_rungs_.begin(), object_rungs_.end(), [&](const Rung& r) {
        return r.start_index <= index && index < r.start_index + r.size;
    });
    const auto height = static_cast<std::uint64_t>(std::countr_zero(rung->size));
    std::uint64_t offset = index;
    for (std::uint64_t level = 0; level < height; ++level) {
        const std::uint64_t sibling = offset ^ 1;
        const Digest& left = levels_[level][std::min(offset, sibling)];
        const Digest& right = levels_[level][std::max(offset, sibling)];
        offset >>= 1;
        levels_[level + 1][offset] = node_hash(left, right);
    }
    rung->root = levels_[height][rung->start_index >> height];
}

Digest Ladder::root() const {
    if (object_rungs_.empty() && metadata_rungs_.empty()) {
        throw Error{Errc::empty_ladder, "ladder has no rungs"};
    }
    return ladder_root_from_roots(leaf_count_, rung_roots());
}

std::vector<Digest> Ladder::rung_roots() const {
    std::vector<Digest> roots;
    roots.reserve(object_rungs_.size() + metadata_rungs_.size());
    for (const auto& r : object_rungs_) {
        roots.push_back(r.root);
    }
    for (const auto& r : metadata_rungs_) {
        roots.push_back(r.root);
    }
    return roots;
}

AuthPath Ladder::auth_path(std::uint64_t index) const {
    if (index >= leaf_count_) {
        throw Error{Errc::index_out_of_range, "leaf index out of range"};
    }
    AuthPath path;
    path.leaf_index = index;
    for (std::size_t pos = 0; pos < object_rungs_.size(); ++pos) {
        const Rung& rung = object_rungs_[pos];
        if (index < rung.start_index || index >= rung.start_index + rung.size) {
            continue;
        }
        path.rung_position = pos;
        const auto height = static_cast<std::uint64_t>(std::countr_zero(rung.size));
        path.siblings.reserve(height);
        std::uint64_t offset = index;
        for (std::uint64_t level = 0; level < height; ++level) {
            path.siblings.push_back(levels_[level][offset ^ 1]);
            offset >>= 1;
        }
        return path;
    }
    throw Error{Errc::index_out_of_range, "leaf not covered by any rung"};
}

Ladder Ladder::rebuild(std::span<const Digest> commitments, std::span<const Digest> metadata) {
    Ladder ladder;
    ladder.leaf_count_ = commitments.size();
    ladder.levels_.emplace_back(commitments.begin(), commitments.end());

    std::uint64_t start = 0;
    for (std::uint64_t size : rung_sizes(commitments.size())) {
        ladder.object_rungs_.push_back(Rung{start, size, {}, RungKind::object});
        start += size;
    }

    // One pass per level; each internal node is hashed exactly once, giving
    // n - r node hashes for n leaves over r rungs.
    for (std::uint64_t level = 0; !ladder.levels_[level].empty(); ++level) {
        const auto& below = ladder.levels_[level];
        const std::uint64_t above_count = ladder.leaf_count_ >> (level + 1);
        if (above_count == 0) {
            break;
        }
        std::vector<Digest> above;
        above.reserve(above_count);
        for (std::uint64_t o = 0; o < above_count; ++o) {
            above.push_back(node_hash(below[2 * o], below[2 * o + 1]));
        }
        ladder.levels_.push_back(std::move(above));
    }

    for (auto& rung : ladder.object_rungs_) {
        const auto height = static_cast<std::uint64_t>(std::countr_zero(rung.size));
        rung.root = ladder.levels_[height][rung.start_index >> height];
    }
    for (const auto& m : metadata) {
        ladder.append_metadata_rung(m);
    }
    return ladder;
}

const Digest& Ladder::node(std::uint64_t level, std::uint64_t offset) const {
    if (!has_node(level, offset)) {
        throw Error{Errc::index_out_of_range, "no cached node at (level, offset)"};
    }
    return levels_[level][offset];
}

bool Ladder::has_node(std::uint64_t level, std::uint64_t offset) const {
    return level < levels_.size() && offset < levels_[level].size();
}

std::uint64_t Ladder::cached_node_count() const {
    std::uint64_t n = 0;
    for (const auto& lvl : levels_) {
        n += lvl.size();
    }
    return n;
}

Digest Ladder::cache_fingerprint() const {
    std::string buf;
    for (const auto& lvl : levels_) {
        buf.append(u64_be(lvl.size()));
        for (const auto& d : lvl) {
            buf.append(d.view());
        }
    }
    return sha256(buf);
}

void Ladder::refresh_metadata_offsets() {
    std::uint64_t start = leaf_count_;
    for (auto& rung : metadata_rungs_) {
        rung.start_index = start++;
    }
}

namespace {
constexpr std::uint8_t kTagLeafCount = 0x01;
constexpr std::uint8_t kTagLevel = 0x02;
constexpr std::uint8_t kTagMetadataRoot = 0x03;
} // namespace

std::string Ladder::serialize() const {
    TlvWriter w;
    w.put_u64(kTagLeafCount, leaf_count_);
    for (const auto& lvl : levels_) {
        std::string packed;
        packed.reserve(32 * lvl.size());
        for (const auto& d : lvl) {
            packed.append(d.view());
        }
        w.put(kTagLevel, packed);
    }
    for (const auto& rung : metadata_rungs_) {
        w.put_digest(kTagMetadataRoot, rung.root);
    }
    return w.take();
}

Ladder Ladder::deserialize(std::string_view bytes) {
    TlvReader r{bytes};
    const std::uint64_t leaf_count = r.expect_u64(kTagLeafCount);

    Ladder ladder;
    ladder.leaf_count_ = leaf_count;
    while (r.peek(kTagLevel)) {
        auto packed = r.expect(kTagLevel);
        if (packed.size() % 32 != 0) {
            throw Error{Errc::parse_error, "ladder level not a multiple of 32 bytes"};
        }
        std::vector<Digest> lvl(packed.size() / 32);
        for (std::size_t i = 0; i < lvl.size(); ++i) {
            std::copy_n(packed.begin() + static_cast<std::ptrdiff_t>(32 * i), 32,
                        reinterpret_cast<char*>(lvl[i].value.data()));
        }
        ladder.levels_.push_back(std::move(lvl));
    }
    if (leaf_count > 0 && (ladder.levels_.empty() || ladder.levels_[0].size() != leaf_count)) {
        throw Error{Errc::parse_error, "ladder leaf level inconsistent with count"};
    }
    for (std::uint64_t level = 1; level < ladder.levels_.size(); ++level) {
        if (ladder.levels_[level].size() != leaf_count >> level) {
            throw Error{Errc::parse_error, "ladder level size inconsistent with count"};
        }
    }
    std::uint64_t start = 0;
    for (std::uint64_t size : rung_sizes(leaf_count)) {
        const auto height = static_cast<std::uint64_t>(std::countr_zero(size));
        ladder.object_rungs_.push_back(
            Rung{start, size, ladder.levels_[height][start >> height], RungKind::object});
        start += size;
    }
    while (r.peek(kTagMetadataRoot)) {
        ladder.append_metadata_rung(r.expect_digest(kTagMetadataRoot));
    }
    r.expect_done();
    return ladder;
}

} // namespace mtlrpki
