#include "mtlrpki/sig.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace mtlrpki {

namespace {

std::string digest_bytes(const Digest& d) {
    return std::string{d.view()};
}

} // namespace

const std::vector<SchemeProfile>& scheme_catalog() {
    static const std::vector<SchemeProfile> catalog = {
        {std::string{kTestScheme}, 32, 64, true},
        {"falcon-model", 897, 666, false},
        {"rsa2048-model", 270, 256, false},
        {"mldsa-model", 1312, 2420, false},
    };
    return catalog;
}

SchemeProfile scheme_by_name(std::string_view name) {
    for (const auto& p : scheme_catalog()) {
        if (p.name == name) {
            return p;
        }
    }
    throw Error{Errc::not_found, "unknown scheme: " + std::string{name}};
}

std::vector<SchemeProfile> load_profiles(const std::filesystem::path& file) {
    std::ifstream in{file, std::ios::binary};
    if (!in) {
        throw Error{Errc::not_found, "cannot open scheme config: " + file.string()};
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error{Errc::parse_error, std::string{"scheme config: "} + e.what()};
    }
    if (!doc.is_array()) {
        throw Error{Errc::parse_error, "scheme config must be a JSON array"};
    }
    std::vector<SchemeProfile> out;
    for (const auto& item : doc) {
        SchemeProfile p;
        p.name = item.at("name").get<std::string>();
        p.public_key_bytes = item.at("public_key_bytes").get<std::uint64_t>();
        p.signature_bytes = item.at("signature_bytes").get<std::uint64_t>();
        p.executable = item.value("executable", false);
        if (p.name.empty() || p.public_key_bytes == 0 || p.signature_bytes == 0) {
            throw Error{Errc::parse_error, "scheme config: invalid profile entry"};
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::string KeyPair::verification_record() const {
    return public_key + secret_key;
}

KeyPair keygen(const SchemeProfile& scheme, std::string_view seed) {
    if (!scheme.executable) {
        throw Error{Errc::not_executable, "scheme is size-model only: " + scheme.name};
    }
    if (scheme.name != kTestScheme) {
        throw Error{Errc::not_executable, "no backend for scheme: " + scheme.name};
    }
    KeyPair kp;
    kp.scheme = scheme;
    kp.secret_key = digest_bytes(sha256("mtlrpki.ths.sk" + std::string{seed}));
    kp.public_key = digest_bytes(sha256(kp.secret_key));
    return kp;
}

RootSignature sign(const KeyPair& key, std::string_view message, std::string_view signer_id) {
    if (!key.scheme.executable) {
        throw Error{Errc::not_executable, "scheme is size-model only: " + key.scheme.name};
    }
    if (key.scheme.name != kTestScheme || key.secret_key.size() != 32) {
        throw Error{Errc::signing_failure, "cannot sign with scheme: " + key.scheme.name};
    }
    RootSignature out;
    out.scheme = key.scheme.name;
    out.signer_id = std::string{signer_id};
    out.signature =
        digest_bytes(sha256(key.secret_key + std::string{message})) + digest_bytes(sha256(message));
    out.signed_payload = sha256(message);
    return out;
}

bool verify(const SchemeProfile& scheme, std::string_view verification_record,
            std::string_view message, std::string_view signature) {
    if (!scheme.executable || scheme.name != kTestScheme) {
        return false;
    }
    if (verification_record.size() != 64 || signature.size() != 64) {
        return false;
    }
    const std::string pk{verification_record.substr(0, 32)};
    const std::string token{verification_record.substr(32, 32)};
    if (sha256(token).view() != pk) {
        return false;
    }
    const Digest mac = sha256(token + std::string{message});
    const Digest msg = sha256(message);
    return signature.substr(0, 32) == mac.view() && signature.substr(32, 32) == msg.view();
}

} // namespace mtlrpki
