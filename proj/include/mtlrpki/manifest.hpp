#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mtlrpki/digest.hpp"

namespace mtlrpki {

/// Manifest entry labels. Name entries point at a served file; deleted and
/// hidden entries keep their leaf commitment but carry no filename, so leaf
/// indices stay stable across removals and non-public issuance.
enum class EntryLabel : std::uint8_t { name = 0, deleted = 1, hidden = 2 };

struct ManifestEntry {
    EntryLabel label = EntryLabel::name;
    std::string name; // set iff label == name
    Digest commitment{};

    bool operator==(const ManifestEntry&) const = default;
};

/// The authenticated ordered file list of one CA. Entry position is the
/// ladder leaf index; commitments let a validator rebuild the object rungs
/// without fetching unchanged files. The manifest's own leaf hash is taken
/// over its serialized bytes by the consumer and is never listed inside.
struct Manifest {
    std::string ca_id;
    std::uint64_t epoch = 0;
    std::uint64_t serial = 0;
    std::uint64_t issued_at = 0;
    std::vector<std::uint64_t> rung_descriptor;
    Digest crl_commitment{};
    std::vector<ManifestEntry> entries;
    std::map<std::string, std::string> legacy_fields; // sorted, additive extension space

    std::string serialize() const;
    static Manifest parse(std::string_view bytes);

    bool operator==(const Manifest&) const = default;
};

struct CrlEntry {
    std::uint64_t leaf_index = 0;
    std::uint64_t revoked_at = 0;

    bool operator==(const CrlEntry&) const = default;
};

/// Per-CA revocation record; one entry per revoked leaf, sorted by index.
struct Crl {
    std::string ca_id;
    std::uint64_t serial = 0;
    std::vector<CrlEntry> revoked;

    std::string serialize() const;
    static Crl parse(std::string_view bytes);

    bool operator==(const Crl&) const = default;
};

} // namespace mtlrpki
