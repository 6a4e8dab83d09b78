#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtlrpki/digest.hpp"
#include "mtlrpki/errors.hpp"

namespace mtlrpki {

// Repository layout:
//   <repo>/<ca_id>/<epoch>.<serial>/{manifest.bin, crl.bin, root.bin, obj/<name>, path/<name>}
//   <repo>/<ca_id>/current            one line: "<epoch>.<serial>"
//   <repo>/<ca_id>/state.bin          CA private state (never served)
//   <repo>/_registry/{listing.bin, root.bin, state.bin}
//   <repo>/trust_anchor.json

struct SnapshotRef {
    std::uint64_t epoch = 0;
    std::uint64_t serial = 0;

    std::string dirname() const { return std::to_string(epoch) + "." + std::to_string(serial); }
    static SnapshotRef parse(std::string_view text);

    bool operator==(const SnapshotRef&) const = default;
};

namespace paths {
std::filesystem::path ca_dir(const std::filesystem::path& repo, std::string_view ca_id);
std::filesystem::path snapshot_dir(const std::filesystem::path& repo, std::string_view ca_id,
                                   const SnapshotRef& ref);
std::filesystem::path current_pointer(const std::filesystem::path& repo, std::string_view ca_id);
std::filesystem::path ca_state(const std::filesystem::path& repo, std::string_view ca_id);
std::filesystem::path registry_dir(const std::filesystem::path& repo);
std::filesystem::path trust_anchor(const std::filesystem::path& repo);
} // namespace paths

/// Write-then-rename; readers never observe a partially written file.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path); // throws not_found
std::optional<std::string> try_read_file(const std::filesystem::path& path);

/// True for names safe to embed in the repository layout and URLs:
/// [A-Za-z0-9._-]+, no leading dot or underscore.
bool is_safe_name(std::string_view name);

std::string base64_encode(std::string_view data);
std::string base64_decode(std::string_view text); // throws parse_error

/// The per-CA signed (or parent-covered) root record, published alongside
/// each snapshot as root.bin. JSON, since humans debug these.
struct CaRootRecord {
    std::string ca_id;
    std::uint64_t epoch = 0;
    std::uint64_t serial = 0;
    Digest ladder_root{};
    std::vector<std::uint64_t> rung_descriptor;
    std::string mode;   // "hosted" | "delegated"
    std::string parent; // hosted: registry id that aggregates this CA
    std::string scheme; // delegated: signing scheme
    std::string signer_id;
    std::string signature;           // delegated: raw bytes (base64 on the wire)
    std::vector<Digest> rung_roots;  // per-object verification baseline only

    std::string to_json() const;
    static CaRootRecord from_json(std::string_view text);
};

/// Registry root record: the aggregate root plus its trust anchor signature.
struct RegistryRootRecord {
    std::string registry_id;
    std::uint64_t epoch = 0;
    std::uint64_t serial = 0;
    Digest aggregate_root{};
    std::string scheme;
    std::string signer_id;
    std::string signature;

    std::string to_json() const;
    static RegistryRootRecord from_json(std::string_view text);
};

/// What a relying party is preconfigured with.
struct TrustAnchor {
    std::string registry_id;
    std::string scheme;
    std::string verification_record;

    std::string to_json() const;
    static TrustAnchor from_json(std::string_view text);
    static TrustAnchor from_file(const std::filesystem::path& path);
};

} // namespace mtlrpki
