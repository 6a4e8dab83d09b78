#include "mtlrpki/manifest.hpp"

#include <algorithm>

#include "mtlrpki/errors.hpp"
#include "mtlrpki/tlv.hpp"

namespace mtlrpki {

namespace {

constexpr std::uint8_t kTagCaId = 0x01;
constexpr std::uint8_t kTagEpoch = 0x02;
constexpr std::uint8_t kTagSerial = 0x03;
constexpr std::uint8_t kTagIssuedAt = 0x04;
constexpr std::uint8_t kTagRungDescriptor = 0x05;
constexpr std::uint8_t kTagCrlCommitment = 0x06;
constexpr std::uint8_t kTagEntry = 0x10;
constexpr std::uint8_t kTagLegacyField = 0x20;

constexpr std::uint8_t kTagCrlEntry = 0x11;

std::string pack_entry(const ManifestEntry& e) {
    TlvWriter w;
    w.put(0x01, std::string(1, static_cast<char>(e.label)));
    if (e.label == EntryLabel::name) {
        w.put(0x02, e.name);
    }
    w.put_digest(0x03, e.commitment);
    return w.take();
}

ManifestEntry unpack_entry(std::string_view bytes) {
    TlvReader r{bytes};
    auto label_bytes = r.expect(0x01);
    if (label_bytes.size() != 1 || static_cast<std::uint8_t>(label_bytes[0]) > 2) {
        throw Error{Errc::parse_error, "manifest entry: bad label"};
    }
    ManifestEntry e;
    e.label = static_cast<EntryLabel>(label_bytes[0]);
    if (e.label == EntryLabel::name) {
        e.name = std::string{r.expect(0x02)};
        if (e.name.empty()) {
            throw Error{Errc::parse_error, "manifest entry: empty name"};
        }
    }
    e.commitment = r.expect_digest(0x03);
    r.expect_done();
    return e;
}

} // namespace

std::string Manifest::serialize() const {
    TlvWriter w;
    w.put(kTagCaId, ca_id);
    w.put_u64(kTagEpoch, epoch);
    w.put_u64(kTagSerial, serial);
    w.put_u64(kTagIssuedAt, issued_at);
    std::string descriptor;
    descriptor.reserve(8 * rung_descriptor.size());
    for (auto s : rung_descriptor) {
        descriptor.append(u64_be(s));
    }
    w.put(kTagRungDescriptor, descriptor);
    w.put_digest(kTagCrlCommitment, crl_commitment);
    for (const auto& e : entries) {
        w.put(kTagEntry, pack_entry(e));
    }
    for (const auto& [key, value] : legacy_fields) {
        TlvWriter f;
        f.put(0x01, key);
        f.put(0x02, value);
        w.put(kTagLegacyField, f.bytes());
    }
    return w.take();
}

Manifest Manifest::parse(std::string_view bytes) {
    TlvReader r{bytes};
    Manifest m;
    m.ca_id = std::string{r.expect(kTagCaId)};
    m.epoch = r.expect_u64(kTagEpoch);
    m.serial = r.expect_u64(kTagSerial);
    m.issued_at = r.expect_u64(kTagIssuedAt);
    auto descriptor = r.expect(kTagRungDescriptor);
    if (descriptor.size() % 8 != 0) {
        throw Error{Errc::parse_error, "manifest: bad rung descriptor"};
    }
    for (std::size_t i = 0; i < descriptor.size(); i += 8) {
        m.rung_descriptor.push_back(u64_from_be(descriptor.substr(i, 8)));
    }
    m.crl_commitment = r.expect_digest(kTagCrlCommitment);
    while (r.peek(kTagEntry)) {
        m.entries.push_back(unpack_entry(r.expect(kTagEntry)));
    }
    std::string last_key;
    while (r.peek(kTagLegacyField)) {
        TlvReader f{r.expect(kTagLegacyField)};
        std::string key{f.expect(0x01)};
        std::string value{f.expect(0x02)};
        f.expect_done();
        if (!m.legacy_fields.empty() && key <= last_key) {
            throw Error{Errc::parse_error, "manifest: legacy fields out of order"};
        }
        last_key = key;
        m.legacy_fields.emplace(std::move(key), std::move(value));
    }
    r.expect_done();
    return m;
}

std::string Crl::serialize() const {
    TlvWriter w;
    w.put(kTagCaId, ca_id);
    w.put_u64(kTagSerial, serial);
    for (const auto& e : revoked) {
        w.put(kTagCrlEntry, u64_be(e.leaf_index) + u64_be(e.revoked_at));
    }
    return w.take();
}

Crl Crl::parse(std::string_view bytes) {
    TlvReader r{bytes};
    Crl c;
    c.ca_id = std::string{r.expect(kTagCaId)};
    c.serial = r.expect_u64(kTagSerial);
    std::uint64_t last = 0;
    while (r.peek(kTagCrlEntry)) {
        auto v = r.expect(kTagCrlEntry);
        if (v.size() != 16) {
            throw Error{Errc::parse_error, "crl entry must be 16 bytes"};
        }
        CrlEntry e{u64_from_be(v.substr(0, 8)), u64_from_be(v.substr(8, 8))};
        if (!c.revoked.empty() && e.leaf_index <= last) {
            throw Error{Errc::parse_error, "crl entries out of order"};
        }
        last = e.leaf_index;
        c.revoked.push_back(e);
    }
    r.expect_done();
    return c;
}

} // namespace mtlrpki
