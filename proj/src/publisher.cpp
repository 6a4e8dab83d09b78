#include "mtlrpki/publisher.hpp"

#include <algorithm>

#include "mtlrpki/tlv.hpp"

namespace mtlrpki {

namespace fs = std::filesystem;

std::string serialize_auth_path(const AuthPath& path) {
    TlvWriter w;
    w.put_u64(0x01, path.leaf_index);
    w.put_u64(0x02, path.rung_position);
    std::string packed;
    packed.reserve(32 * path.siblings.size());
    for (const auto& d : path.siblings) {
        packed.append(d.view());
    }
    w.put(0x03, packed);
    return w.take();
}

AuthPath parse_auth_path(std::string_view bytes) {
    TlvReader r{bytes};
    AuthPath path;
    path.leaf_index = r.expect_u64(0x01);
    path.rung_position = r.expect_u64(0x02);
    auto packed = r.expect(0x03);
    if (packed.size() % 32 != 0) {
        throw Error{Errc::parse_error, "auth path siblings not a multiple of 32 bytes"};
    }
    path.siblings.resize(packed.size() / 32);
    for (std::size_t i = 0; i < path.siblings.size(); ++i) {
        std::copy_n(packed.begin() + static_cast<std::ptrdiff_t>(32 * i), 32,
                    reinterpret_cast<char*>(path.siblings[i].value.data()));
    }
    r.expect_done();
    return path;
}

CaPublisher::CaPublisher(fs::path repo, std::string ca_id, CaOptions options)
    : repo_(std::move(repo)), ca_id_(std::move(ca_id)), options_(std::move(options)) {}

CaPublisher CaPublisher::init(fs::path repo, std::string ca_id, CaOptions options) {
    if (!is_safe_name(ca_id)) {
        throw Error{Errc::bad_state, "ca id is not filesystem-safe: " + ca_id};
    }
    if (fs::exists(paths::ca_state(repo, ca_id))) {
        throw Error{Errc::duplicate_ca, "ca already initialized: " + ca_id};
    }
    CaPublisher ca{std::move(repo), std::move(ca_id), std::move(options)};
    if (ca.options_.mode == CaMode::delegated) {
        const std::string seed = ca.options_.seed.empty() ? ca.ca_id_ : ca.options_.seed;
        ca.keypair_ = keygen(ca.options_.scheme, seed);
    }
    ca.save_state();
    return ca;
}

void CaPublisher::ensure_name_free(std::string_view name) const {
    for (const auto& obj : objects_) {
        if (obj.status != ObjectStatus::deleted && obj.name == name) {
            throw Error{Errc::duplicate_name, "object name in use: " + std::string{name}};
        }
    }
}

RepositoryObject& CaPublisher::live_object(std::string_view name, ObjectStatus expected) {
    for (auto& obj : objects_) {
        if (obj.name != name) {
            continue;
        }
        if (obj.status == ObjectStatus::deleted) {
            continue;
        }
        if (obj.status != expected) {
            throw Error{Errc::bad_state, "object has unexpected status: " + std::string{name}};
        }
        return obj;
    }
    throw Error{Errc::not_found, "no such object: " + std::string{name}};
}

const RepositoryObject& CaPublisher::object(std::string_view name) const {
    for (const auto& obj : objects_) {
        if (obj.name == name && obj.status != ObjectStatus::deleted) {
            return obj;
        }
    }
    throw Error{Errc::not_found, "no such object: " + std::string{name}};
}

bool CaPublisher::has_object(std::string_view name) const {
    return std::any_of(objects_.begin(), objects_.end(), [&](const RepositoryObject& o) {
        return o.name == name && o.status != ObjectStatus::deleted;
    });
}

std::string CaPublisher::classical_sidecar(std::string_view payload) const {
    // Size-model filler standing in for an embedded classical signature;
    // deterministic so repositories reproduce bit-exactly.
    std::string out;
    Digest block = sha256("classical-sidecar" + std::string{leaf_hash(payload).view()});
    while (out.size() < options_.classical.signature_bytes) {
        out.append(block.view());
        block = sha256(block.view());
    }
    out.resize(options_.classical.signature_bytes);
    return out;
}

void CaPublisher::issue_object(std::string_view name, std::string_view payload) {
    if (!is_safe_name(name)) {
        throw Error{Errc::bad_state, "object name is not filesystem-safe: " + std::string{name}};
    }
    ensure_name_free(name);
    RepositoryObject obj;
    obj.name = std::string{name};
    obj.payload = std::string{payload};
    obj.status = ObjectStatus::published;
    obj.leaf_index = ladder_.leaf_count();
    obj.commitment = leaf_hash(payload);
    if (options_.dual_stack) {
        obj.classical_sig = classical_sidecar(payload);
    }
    ladder_.append_leaf(obj.commitment);
    objects_.push_back(std::move(obj));
}

void CaPublisher::delete_object(std::string_view name) {
    for (auto& obj : objects_) {
        if (obj.name != name) {
            continue;
        }
        if (obj.status == ObjectStatus::deleted) {
            throw Error{Errc::already_deleted, "object already deleted: " + std::string{name}};
        }
        if (obj.status != ObjectStatus::published) {
            throw Error{Errc::bad_state, "only published objects can be deleted: " + std::string{name}};
        }
        obj.status = ObjectStatus::deleted;
        obj.payload.clear();
        obj.classical_sig.clear();
        obj.revoked = true;
        obj.revoked_at = clock_seconds_;
        return;
    }
    throw Error{Errc::not_found, "no such object: " + std::string{name}};
}

void CaPublisher::hide_object(std::string_view name, std::string_view payload) {
    if (!is_safe_name(name)) {
        throw Error{Errc::bad_state, "object name is not filesystem-safe: " + std::string{name}};
    }
    ensure_name_free(name);
    RepositoryObject obj;
    obj.name = std::string{name};
    obj.payload = std::string{payload};
    obj.status = ObjectStatus::hidden;
    obj.leaf_index = ladder_.leaf_count();
    obj.commitment = leaf_hash(payload);
    ladder_.append_leaf(obj.commitment);
    objects_.push_back(std::move(obj));
}

void CaPublisher::revoke_hidden(std::string_view name) {
    auto& obj = live_object(name, ObjectStatus::hidden);
    obj.revoked = true;
    obj.revoked_at = clock_seconds_;
}

std::pair<Manifest, Crl> CaPublisher::build_metadata() {
    ++serial_;

    Crl crl;
    crl.ca_id = ca_id_;
    crl.serial = serial_;
    for (const auto& obj : objects_) {
        if (obj.revoked) {
            crl.revoked.push_back(CrlEntry{obj.leaf_index, obj.revoked_at});
        }
    }

    Manifest m;
    m.ca_id = ca_id_;
    m.epoch = epoch_;
    m.serial = serial_;
    m.issued_at = clock_seconds_;
    m.rung_descriptor = rung_sizes(ladder_.leaf_count());
    m.crl_commitment = leaf_hash(crl.serialize());
    m.entries.reserve(objects_.size());
    for (const auto& obj : objects_) {
        ManifestEntry e;
        e.commitment = obj.commitment;
        switch (obj.status) {
        case ObjectStatus::published:
            e.label = EntryLabel::name;
            e.name = obj.name;
            break;
        case ObjectStatus::deleted:
            e.label = EntryLabel::deleted;
            break;
        case ObjectStatus::hidden:
            e.label = EntryLabel::hidden;
            break;
        }
        m.entries.push_back(std::move(e));
    }
    return {std::move(m), std::move(crl)};
}

RateDecision CaPublisher::rate_limit_check() const {
    const auto& limits = options_.limits;
    if (limits.max_deletes_per_epoch > 0 && deleted_count() > limits.max_deletes_per_epoch) {
        return {false, "deletion cap exceeded for this epoch"};
    }
    if (limits.max_publishes_per_window > 0) {
        const std::uint64_t window_start =
            clock_seconds_ >= limits.window_seconds ? clock_seconds_ - limits.window_seconds : 0;
        std::uint64_t recent = 0;
        for (auto t : publish_times_) {
            if (t >= window_start) {
                ++recent;
            }
        }
        if (recent >= limits.max_publishes_per_window) {
            return {false, "publish rate cap exceeded for this window"};
        }
    }
    return {true, {}};
}

std::uint64_t CaPublisher::deleted_count() const {
    return static_cast<std::uint64_t>(std::count_if(
        objects_.begin(), objects_.end(),
        [](const RepositoryObject& o) { return o.status == ObjectStatus::deleted; }));
}

const KeyPair& CaPublisher::keypair() const {
    if (!keypair_) {
        throw Error{Errc::bad_state, "hosted ca has no keypair"};
    }
    return *keypair_;
}

std::vector<std::string> CaPublisher::published_names() const {
    std::vector<std::string> names;
    for (const auto& obj : objects_) {
        if (obj.status == ObjectStatus::published) {
            names.push_back(obj.name);
        }
    }
    return names;
}

PublishedSnapshot CaPublisher::publish() {
    const auto decision = rate_limit_check();
    if (!decision.allowed) {
        throw Error{Errc::rate_limited, decision.reason};
    }

    auto [manifest, crl] = build_metadata();
    PublishedSnapshot snap;
    snap.ca_id = ca_id_;
    snap.epoch = epoch_;
    snap.serial = serial_;
    snap.crl_bytes = crl.serialize();
    snap.manifest_bytes = manifest.serialize();

    const Digest crl_leaf = manifest.crl_commitment;
    const Digest manifest_leaf = leaf_hash(snap.manifest_bytes);
    if (ladder_.metadata_rungs().empty()) {
        ladder_.append_metadata_rung(crl_leaf);
        ladder_.append_metadata_rung(manifest_leaf);
    } else {
        ladder_.set_metadata_rung(0, crl_leaf);
        ladder_.set_metadata_rung(1, manifest_leaf);
    }
    snap.ladder_root = ladder_.root();

    CaRootRecord rec;
    rec.ca_id = ca_id_;
    rec.epoch = epoch_;
    rec.serial = serial_;
    rec.ladder_root = snap.ladder_root;
    rec.rung_descriptor = manifest.rung_descriptor;
    if (options_.mode == CaMode::delegated) {
        rec.mode = "delegated";
        rec.scheme = options_.scheme.name;
        rec.signer_id = ca_id_;
        rec.signature = sign(keypair(), snap.ladder_root.view(), ca_id_).signature;
    } else {
        rec.mode = "hosted";
        rec.parent = options_.registry_id;
    }
    if (options_.emit_paths) {
        rec.rung_roots = ladder_.rung_roots();
    }
    snap.root_record = rec;

    for (const auto& obj : objects_) {
        if (obj.status == ObjectStatus::published) {
            snap.objects.emplace(obj.name, obj.payload);
        }
    }

    write_snapshot(snap);
    atomic_write(paths::current_pointer(repo_, ca_id_), SnapshotRef{epoch_, serial_}.dirname() + "\n");
    publish_times_.push_back(clock_seconds_);
    last_published_ = SnapshotRef{epoch_, serial_};
    published_once_ = true;
    save_state();
    return snap;
}

void CaPublisher::write_snapshot(PublishedSnapshot& snap) const {
    const fs::path dir = paths::snapshot_dir(repo_, ca_id_, SnapshotRef{snap.epoch, snap.serial});
    snap.dir = dir;
    fs::create_directories(dir / "obj");
    atomic_write(dir / "manifest.bin", snap.manifest_bytes);
    atomic_write(dir / "crl.bin", snap.crl_bytes);
    atomic_write(dir / "root.bin", snap.root_record.to_json());

    // Object files never change once written; hard-link them forward from
    // the previous snapshot instead of rewriting every one.
    const fs::path prev_obj =
        published_once_ ? paths::snapshot_dir(repo_, ca_id_, last_published_) / "obj" : fs::path{};
    for (const auto& [name, payload] : snap.objects) {
        const fs::path target = dir / "obj" / name;
        if (!prev_obj.empty()) {
            std::error_code ec;
            fs::create_hard_link(prev_obj / name, target, ec);
            if (!ec) {
                continue;
            }
        }
        atomic_write(target, payload);
    }

    if (options_.dual_stack) {
        fs::create_directories(dir / "sig");
        for (const auto& obj : objects_) {
            if (obj.status == ObjectStatus::published) {
                atomic_write(dir / "sig" / obj.name, obj.classical_sig);
            }
        }
    }
    if (options_.emit_paths) {
        fs::create_directories(dir / "path");
        for (const auto& obj : objects_) {
            if (obj.status == ObjectStatus::published) {
                atomic_write(dir / "path" / obj.name,
                             serialize_auth_path(ladder_.auth_path(obj.leaf_index)));
            }
        }
    }
}

void CaPublisher::rebuild_epoch() {
    std::vector<RepositoryObject> survivors;
    std::vector<Digest> commitments;
    for (auto& obj : objects_) {
        if (obj.status == ObjectStatus::deleted) {
            continue;
        }
        obj.leaf_index = commitments.size();
        obj.revoked = false;
        obj.revoked_at = 0;
        commitments.push_back(obj.commitment);
        survivors.push_back(std::move(obj));
    }
    objects_ = std::move(survivors);
    ladder_ = Ladder::rebuild(commitments, {});
    ++epoch_;
    serial_ = 0;
    save_state();
}

namespace {

constexpr std::uint8_t kTagCaId = 0x01;
constexpr std::uint8_t kTagMode = 0x02;
constexpr std::uint8_t kTagScheme = 0x03;
constexpr std::uint8_t kTagDualStack = 0x04;
constexpr std::uint8_t kTagClassical = 0x05;
constexpr std::uint8_t kTagEmitPaths = 0x06;
constexpr std::uint8_t kTagRegistryId = 0x07;
constexpr std::uint8_t kTagLimits = 0x08;
constexpr std::uint8_t kTagPublicKey = 0x09;
constexpr std::uint8_t kTagSecretKey = 0x0a;
constexpr std::uint8_t kTagEpoch = 0x0b;
constexpr std::uint8_t kTagSerial = 0x0c;
constexpr std::uint8_t kTagClock = 0x0d;
constexpr std::uint8_t kTagPublishTime = 0x0e;
constexpr std::uint8_t kTagLastPublished = 0x0f;
constexpr std::uint8_t kTagObject = 0x10;
constexpr std::uint8_t kTagSeed = 0x11;

std::string pack_object(const RepositoryObject& o) {
    TlvWriter w;
    w.put(0x01, o.name);
    w.put(0x02, std::string(1, static_cast<char>(o.status)));
    w.put_u64(0x03, o.leaf_index);
    w.put_digest(0x04, o.commitment);
    w.put(0x05, o.payload);
    w.put(0x06, o.classical_sig);
    w.put(0x07, std::string(1, o.revoked ? '\x01' : '\x00'));
    w.put_u64(0x08, o.revoked_at);
    return w.take();
}

RepositoryObject unpack_object(std::string_view bytes) {
    TlvReader r{bytes};
    RepositoryObject o;
    o.name = std::string{r.expect(0x01)};
    auto status = r.expect(0x02);
    if (status.size() != 1 || static_cast<std::uint8_t>(status[0]) > 2) {
        throw Error{Errc::parse_error, "ca state: bad object status"};
    }
    o.status = static_cast<ObjectStatus>(status[0]);
    o.leaf_index = r.expect_u64(0x03);
    o.commitment = r.expect_digest(0x04);
    o.payload = std::string{r.expect(0x05)};
    o.classical_sig = std::string{r.expect(0x06)};
    auto revoked = r.expect(0x07);
    o.revoked = revoked.size() == 1 && revoked[0] == '\x01';
    o.revoked_at = r.expect_u64(0x08);
    r.expect_done();
    return o;
}

} // namespace

std::string CaPublisher::state_bytes() const {
    TlvWriter w;
    w.put(kTagCaId, ca_id_);
    w.put(kTagMode, std::string(1, static_cast<char>(options_.mode)));
    w.put(kTagScheme, options_.scheme.name);
    w.put(kTagDualStack, std::string(1, options_.dual_stack ? '\x01' : '\x00'));
    w.put(kTagClassical, options_.classical.name);
    w.put(kTagEmitPaths, std::string(1, options_.emit_paths ? '\x01' : '\x00'));
    w.put(kTagRegistryId, options_.registry_id);
    w.put(kTagSeed, options_.seed);
    w.put(kTagLimits, u64_be(options_.limits.max_deletes_per_epoch) +
                          u64_be(options_.limits.max_publishes_per_window) +
                          u64_be(options_.limits.window_seconds));
    if (keypair_) {
        w.put(kTagPublicKey, keypair_->public_key);
        w.put(kTagSecretKey, keypair_->secret_key);
    }
    w.put_u64(kTagEpoch, epoch_);
    w.put_u64(kTagSerial, serial_);
    w.put_u64(kTagClock, clock_seconds_);
    for (auto t : publish_times_) {
        w.put_u64(kTagPublishTime, t);
    }
    if (published_once_) {
        w.put(kTagLastPublished, u64_be(last_published_.epoch) + u64_be(last_published_.serial));
    }
    for (const auto& obj : objects_) {
        w.put(kTagObject, pack_object(obj));
    }
    return w.take();
}

void CaPublisher::save_state() const {
    atomic_write(paths::ca_state(repo_, ca_id_), state_bytes());
}

CaPublisher CaPublisher::load(fs::path repo, std::string_view ca_id) {
    const auto state = try_read_file(paths::ca_state(repo, ca_id));
    if (!state) {
        throw Error{Errc::not_found, "no ca state for: " + std::string{ca_id}};
    }
    return from_state(std::move(repo), *state);
}

CaPublisher CaPublisher::from_state(fs::path repo, std::string_view bytes) {
    TlvReader r{bytes};
    std::string ca_id{r.expect(kTagCaId)};
    CaOptions options;
    auto mode = r.expect(kTagMode);
    if (mode.size() != 1 || static_cast<std::uint8_t>(mode[0]) > 1) {
        throw Error{Errc::parse_error, "ca state: bad mode"};
    }
    options.mode = static_cast<CaMode>(mode[0]);
    const std::string scheme_name{r.expect(kTagScheme)};
    options.scheme = scheme_name.empty() ? SchemeProfile{} : scheme_by_name(scheme_name);
    options.dual_stack = r.expect(kTagDualStack) == std::string_view{"\x01", 1};
    const std::string classical_name{r.expect(kTagClassical)};
    options.classical = classical_name.empty() ? SchemeProfile{} : scheme_by_name(classical_name);
    options.emit_paths = r.expect(kTagEmitPaths) == std::string_view{"\x01", 1};
    options.registry_id = std::string{r.expect(kTagRegistryId)};
    options.seed = std::string{r.expect(kTagSeed)};
    auto limits = r.expect(kTagLimits);
    if (limits.size() != 24) {
        throw Error{Errc::parse_error, "ca state: bad limits"};
    }
    options.limits.max_deletes_per_epoch = u64_from_be(limits.substr(0, 8));
    options.limits.max_publishes_per_window = u64_from_be(limits.substr(8, 8));
    options.limits.window_seconds = u64_from_be(limits.substr(16, 8));

    CaPublisher ca{std::move(repo), std::move(ca_id), options};
    if (r.peek(kTagPublicKey)) {
        KeyPair kp;
        kp.scheme = options.scheme;
        kp.public_key = std::string{r.expect(kTagPublicKey)};
        kp.secret_key = std::string{r.expect(kTagSecretKey)};
        ca.keypair_ = std::move(kp);
    }
    ca.epoch_ = r.expect_u64(kTagEpoch);
    ca.serial_ = r.expect_u64(kTagSerial);
    ca.clock_seconds_ = r.expect_u64(kTagClock);
    while (r.peek(kTagPublishTime)) {
        ca.publish_times_.push_back(r.expect_u64(kTagPublishTime));
    }
    if (r.peek(kTagLastPublished)) {
        auto v = r.expect(kTagLastPublished);
        if (v.size() != 16) {
            throw Error{Errc::parse_error, "ca state: bad snapshot ref"};
        }
        ca.last_published_ = SnapshotRef{u64_from_be(v.substr(0, 8)), u64_from_be(v.substr(8, 8))};
        ca.published_once_ = true;
    }
    std::vector<Digest> commitments;
    while (r.peek(kTagObject)) {
        auto obj = unpack_object(r.expect(kTagObject));
        if (obj.leaf_index != commitments.size()) {
            throw Error{Errc::parse_error, "ca state: objects out of leaf order"};
        }
        commitments.push_back(obj.commitment);
        ca.objects_.push_back(std::move(obj));
    }
    r.expect_done();
    ca.ladder_ = Ladder::rebuild(commitments, {});
    return ca;
}

// --- Registry -------------------------------------------------------------

namespace {
constexpr std::uint8_t kTagChildId = 0x01;
constexpr std::uint8_t kTagChildMode = 0x02;
constexpr std::uint8_t kTagChildRoot = 0x03;
constexpr std::uint8_t kTagChildScheme = 0x04;
constexpr std::uint8_t kTagChildKey = 0x05;
constexpr std::uint8_t kTagChildUrl = 0x06;
constexpr std::uint8_t kTagListingEntry = 0x10;
} // namespace

std::string ChildEntry::serialize() const {
    TlvWriter w;
    w.put(kTagChildId, child_id);
    w.put(kTagChildMode, std::string(1, static_cast<char>(mode)));
    if (mode == ChildMode::hosted) {
        w.put_digest(kTagChildRoot, ladder_root);
    } else {
        w.put(kTagChildScheme, scheme);
        w.put(kTagChildKey, public_key);
        w.put(kTagChildUrl, base_url);
    }
    return w.take();
}

ChildEntry ChildEntry::parse(std::string_view bytes) {
    TlvReader r{bytes};
    ChildEntry e;
    e.child_id = std::string{r.expect(kTagChildId)};
    auto mode = r.expect(kTagChildMode);
    if (mode.size() != 1 || static_cast<std::uint8_t>(mode[0]) > 1) {
        throw Error{Errc::parse_error, "child entry: bad mode"};
    }
    e.mode = static_cast<ChildMode>(mode[0]);
    if (e.mode == ChildMode::hosted) {
        e.ladder_root = r.expect_digest(kTagChildRoot);
    } else {
        e.scheme = std::string{r.expect(kTagChildScheme)};
        e.public_key = std::string{r.expect(kTagChildKey)};
        e.base_url = std::string{r.expect(kTagChildUrl)};
    }
    r.expect_done();
    return e;
}

Digest ChildEntry::entry_digest() const {
    return entry_hash(serialize());
}

std::string serialize_listing(const std::vector<ChildEntry>& children) {
    TlvWriter w;
    for (const auto& c : children) {
        w.put(kTagListingEntry, c.serialize());
    }
    return w.take();
}

std::vector<ChildEntry> parse_listing(std::string_view bytes) {
    TlvReader r{bytes};
    std::vector<ChildEntry> out;
    while (r.peek(kTagListingEntry)) {
        out.push_back(ChildEntry::parse(r.expect(kTagListingEntry)));
    }
    r.expect_done();
    return out;
}

Registry::Registry(fs::path repo, std::string registry_id, SchemeProfile scheme, KeyPair key)
    : repo_(std::move(repo)), registry_id_(std::move(registry_id)), scheme_(std::move(scheme)),
      key_(std::move(key)) {}

Registry Registry::init(fs::path repo, std::string registry_id, SchemeProfile scheme,
                        std::string_view seed) {
    const fs::path state = paths::registry_dir(repo) / "state.bin";
    if (fs::exists(state)) {
        throw Error{Errc::duplicate_ca, "registry already initialized"};
    }
    auto key = keygen(scheme, seed.empty() ? std::string_view{registry_id} : seed);
    Registry reg{std::move(repo), std::move(registry_id), std::move(scheme), std::move(key)};
    reg.save_state();
    atomic_write(paths::trust_anchor(reg.repo_), reg.trust_anchor().to_json());
    return reg;
}

std::size_t Registry::child_pos(std::string_view child_id) const {
    for (std::size_t i = 0; i < children_.size(); ++i) {
        if (children_[i].child_id == child_id) {
            return i;
        }
    }
    return static_cast<std::size_t>(-1);
}

bool Registry::has_child(std::string_view child_id) const {
    return child_pos(child_id) != static_cast<std::size_t>(-1);
}

const ChildEntry& Registry::child(std::string_view child_id) const {
    const auto pos = child_pos(child_id);
    if (pos == static_cast<std::size_t>(-1)) {
        throw Error{Errc::unknown_child, "no such child: " + std::string{child_id}};
    }
    return children_[pos];
}

void Registry::add_child(const ChildEntry& entry) {
    if (has_child(entry.child_id)) {
        throw Error{Errc::duplicate_ca, "child already registered: " + entry.child_id};
    }
    children_.push_back(entry);
    aggregate_.append_leaf(entry.entry_digest());
}

void Registry::update_child(const ChildEntry& entry) {
    const auto pos = child_pos(entry.child_id);
    if (pos == static_cast<std::size_t>(-1)) {
        throw Error{Errc::unknown_child, "no such child: " + entry.child_id};
    }
    if (children_[pos] == entry) {
        return; // unchanged entry, aggregate stays put
    }
    children_[pos] = entry;
    aggregate_.update_leaf(pos, entry.entry_digest());
}

void Registry::update_hosted_root(std::string_view child_id, const Digest& new_root) {
    const auto pos = child_pos(child_id);
    if (pos == static_cast<std::size_t>(-1)) {
        throw Error{Errc::unknown_child, "no such child: " + std::string{child_id}};
    }
    if (children_[pos].mode != ChildMode::hosted) {
        throw Error{Errc::bad_state, "child is delegated: " + std::string{child_id}};
    }
    if (children_[pos].ladder_root == new_root) {
        return;
    }
    children_[pos].ladder_root = new_root;
    aggregate_.update_leaf(pos, children_[pos].entry_digest());
}

Digest Registry::aggregate_root() const {
    if (children_.empty()) {
        return ladder_root_from_roots(0, {});
    }
    return aggregate_.root();
}

void Registry::publish() {
    ++serial_;
    const fs::path dir = paths::registry_dir(repo_);
    atomic_write(dir / "listing.bin", serialize_listing(children_));

    RegistryRootRecord rec;
    rec.registry_id = registry_id_;
    rec.epoch = 0;
    rec.serial = serial_;
    rec.aggregate_root = aggregate_root();
    rec.scheme = scheme_.name;
    rec.signer_id = registry_id_;
    rec.signature = sign(key_, rec.aggregate_root.view(), registry_id_).signature;
    atomic_write(dir / "root.bin", rec.to_json());
    save_state();
}

TrustAnchor Registry::trust_anchor() const {
    return TrustAnchor{registry_id_, scheme_.name, key_.verification_record()};
}

void Registry::save_state() const {
    TlvWriter w;
    w.put(0x01, registry_id_);
    w.put(0x02, scheme_.name);
    w.put(0x03, key_.public_key);
    w.put(0x04, key_.secret_key);
    w.put_u64(0x05, serial_);
    for (const auto& c : children_) {
        w.put(0x10, c.serialize());
    }
    atomic_write(paths::registry_dir(repo_) / "state.bin", w.bytes());
}

Registry Registry::load(fs::path repo) {
    const auto bytes = try_read_file(paths::registry_dir(repo) / "state.bin");
    if (!bytes) {
        throw Error{Errc::not_found, "no registry state under repo"};
    }
    TlvReader r{*bytes};
    std::string registry_id{r.expect(0x01)};
    auto scheme = scheme_by_name(r.expect(0x02));
    KeyPair key;
    key.scheme = scheme;
    key.public_key = std::string{r.expect(0x03)};
    key.secret_key = std::string{r.expect(0x04)};
    Registry reg{std::move(repo), std::move(registry_id), std::move(scheme), std::move(key)};
    reg.serial_ = r.expect_u64(0x05);
    while (r.peek(0x10)) {
        auto entry = ChildEntry::parse(r.expect(0x10));
        reg.aggregate_.append_leaf(entry.entry_digest());
        reg.children_.push_back(std::move(entry));
    }
    r.expect_done();
    return reg;
}

} // namespace mtlrpki
