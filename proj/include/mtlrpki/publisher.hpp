#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtlrpki/digest.hpp"
#include "mtlrpki/errors.hpp"
#include "mtlrpki/manifest.hpp"
#include "mtlrpki/mtl.hpp"
#include "mtlrpki/sig.hpp"
#include "mtlrpki/store.hpp"

namespace mtlrpki {

enum class ObjectStatus : std::uint8_t { published = 0, deleted = 1, hidden = 2 };

struct RepositoryObject {
    std::string name;
    std::string payload; // empty once deleted
    ObjectStatus status = ObjectStatus::published;
    std::uint64_t leaf_index = 0;
    Digest commitment{};
    std::string classical_sig; // dual-stack sidecar, size-model bytes
    bool revoked = false;
    std::uint64_t revoked_at = 0;
};

struct RateLimitConfig {
    std::uint64_t max_deletes_per_epoch = 0;    // 0 = unlimited
    std::uint64_t max_publishes_per_window = 0; // 0 = unlimited
    std::uint64_t window_seconds = 60;
};

struct RateDecision {
    bool allowed = true;
    std::string reason;
};

enum class CaMode : std::uint8_t { hosted = 0, delegated = 1 };

struct CaOptions {
    CaMode mode = CaMode::hosted;
    SchemeProfile scheme;        // root signing scheme; executable, delegated only
    bool dual_stack = false;     // attach classical sidecars
    SchemeProfile classical;     // sidecar size profile (dual stack)
    bool emit_paths = false;     // also publish per-object auth path records
    std::string seed;            // deterministic key derivation
    RateLimitConfig limits;
    std::string registry_id = "registry";
};

struct PublishedSnapshot {
    std::string ca_id;
    std::uint64_t epoch = 0;
    std::uint64_t serial = 0;
    std::string manifest_bytes;
    std::string crl_bytes;
    std::map<std::string, std::string> objects; // served files
    Digest ladder_root{};
    CaRootRecord root_record;
    std::filesystem::path dir;
};

/// Serialized per-object auth path record for the per-object verification
/// baseline (path/<name> in a snapshot).
std::string serialize_auth_path(const AuthPath& path);
AuthPath parse_auth_path(std::string_view bytes);

/// CA-side state machine: issues, deletes and hides objects, rebuilds the
/// extended manifest and CRL as trailing depth-0 rungs, and publishes
/// atomic snapshots. One writer per CA.
class CaPublisher {
public:
    /// Creates a fresh CA under repo. Throws duplicate_ca when state for
    /// ca_id already exists.
    static CaPublisher init(std::filesystem::path repo, std::string ca_id, CaOptions options);
    static CaPublisher load(std::filesystem::path repo, std::string_view ca_id);

    void issue_object(std::string_view name, std::string_view payload);
    void delete_object(std::string_view name);
    void hide_object(std::string_view name, std::string_view payload);
    /// Revokes a hidden object: its index lands in the CRL, the manifest
    /// label stays H.
    void revoke_hidden(std::string_view name);

    /// Builds the manifest/CRL pair for the next publish; increments the
    /// serial. publish() calls this itself.
    std::pair<Manifest, Crl> build_metadata();
    Manifest build_manifest() { return build_metadata().first; }

    RateDecision rate_limit_check() const;

    /// Writes a complete snapshot and atomically swaps the serving pointer.
    /// Throws rate_limited when a configured cap is exceeded.
    PublishedSnapshot publish();

    /// Drops deleted entries, reindexes densely, bumps the epoch, resets the
    /// CRL and rebuilds the ladder from scratch.
    void rebuild_epoch();

    void save_state() const;

    // Deterministic time source so tests and the bench drive the clock.
    void set_clock(std::uint64_t seconds) { clock_seconds_ = seconds; }
    void advance_clock(std::uint64_t seconds) { clock_seconds_ += seconds; }
    std::uint64_t clock() const { return clock_seconds_; }

    const std::string& ca_id() const { return ca_id_; }
    CaMode mode() const { return options_.mode; }
    const CaOptions& options() const { return options_; }
    std::uint64_t epoch() const { return epoch_; }
    std::uint64_t serial() const { return serial_; }
    const Ladder& ladder() const { return ladder_; }
    const std::vector<RepositoryObject>& objects() const { return objects_; }
    const RepositoryObject& object(std::string_view name) const;
    bool has_object(std::string_view name) const;
    std::uint64_t deleted_count() const;
    const KeyPair& keypair() const;
    /// Published names in leaf order.
    std::vector<std::string> published_names() const;

private:
    CaPublisher(std::filesystem::path repo, std::string ca_id, CaOptions options);

    RepositoryObject& live_object(std::string_view name, ObjectStatus expected);
    void ensure_name_free(std::string_view name) const;
    std::string state_bytes() const;
    static CaPublisher from_state(std::filesystem::path repo, std::string_view bytes);
    void write_snapshot(PublishedSnapshot& snap) const;
    std::string classical_sidecar(std::string_view payload) const;

    std::filesystem::path repo_;
    std::string ca_id_;
    CaOptions options_;
    std::optional<KeyPair> keypair_;
    std::uint64_t epoch_ = 0;
    std::uint64_t serial_ = 0;
    std::uint64_t clock_seconds_ = 0;
    std::vector<RepositoryObject> objects_; // leaf order
    std::vector<std::uint64_t> publish_times_;
    Ladder ladder_;
    SnapshotRef last_published_{0, 0};
    bool published_once_ = false;
};

enum class ChildMode : std::uint8_t { hosted = 0, delegated = 1 };

/// One leaf of a registry aggregate: a hosted child's current ladder root,
/// or a delegated child's public key material.
struct ChildEntry {
    std::string child_id;
    ChildMode mode = ChildMode::hosted;
    Digest ladder_root{};   // hosted
    std::string scheme;     // delegated
    std::string public_key; // delegated verification record bytes
    std::string base_url;   // delegated, empty = same endpoint

    std::string serialize() const;
    static ChildEntry parse(std::string_view bytes);
    Digest entry_digest() const;

    bool operator==(const ChildEntry&) const = default;
};

std::string serialize_listing(const std::vector<ChildEntry>& children);
std::vector<ChildEntry> parse_listing(std::string_view bytes);

/// Parent-level aggregate: children are leaves of a ladder whose root the
/// trust anchor signs. Hosted child updates touch one merge path; delegated
/// entries change only on key rollover.
class Registry {
public:
    static Registry init(std::filesystem::path repo, std::string registry_id, SchemeProfile scheme,
                         std::string_view seed);
    static Registry load(std::filesystem::path repo);

    void add_child(const ChildEntry& entry);    // throws duplicate_ca on existing id
    void update_child(const ChildEntry& entry); // throws unknown_child
    void update_hosted_root(std::string_view child_id, const Digest& new_root);
    bool has_child(std::string_view child_id) const;
    const ChildEntry& child(std::string_view child_id) const;

    /// Writes listing.bin and the signed root.bin; bumps the serial.
    void publish();

    Digest aggregate_root() const;
    const std::vector<ChildEntry>& children() const { return children_; }
    const KeyPair& trust_anchor_key() const { return key_; }
    TrustAnchor trust_anchor() const;
    std::uint64_t serial() const { return serial_; }
    const std::string& registry_id() const { return registry_id_; }

    void save_state() const;

private:
    Registry(std::filesystem::path repo, std::string registry_id, SchemeProfile scheme, KeyPair key);

    std::size_t child_pos(std::string_view child_id) const; // npos when absent

    std::filesystem::path repo_;
    std::string registry_id_;
    SchemeProfile scheme_;
    KeyPair key_;
    std::uint64_t serial_ = 0;
    std::vector<ChildEntry> children_;
    Ladder aggregate_;
};

} // namespace mtlrpki
