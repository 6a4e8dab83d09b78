#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mtlrpki/digest.hpp"
#include "mtlrpki/errors.hpp"

namespace mtlrpki {

/// Descriptor for a signature scheme. Executable schemes can actually sign
/// and verify; size-model schemes exist only so the byte accounting can
/// price deployments that would use them.
struct SchemeProfile {
    std::string name;
    std::uint64_t public_key_bytes = 0;
    std::uint64_t signature_bytes = 0;
    bool executable = false;

    bool operator==(const SchemeProfile&) const = default;
};

struct KeyPair {
    SchemeProfile scheme;
    std::string public_key;
    std::string secret_key;

    /// Bytes a verifier needs. For the test scheme this is public key plus
    /// the shared verification token (see below); never equal in size to
    /// the profile's public_key_bytes accounting figure by accident.
    std::string verification_record() const;
};

struct RootSignature {
    std::string scheme;
    std::string signer_id;
    std::string signature;
    Digest signed_payload{};
};

/// Built-in profiles:
///   test-hash-sig  32/64    executable; deterministic, for tests and CI
///   falcon-model   897/666  size model
///   rsa2048-model  270/256  size model (DER SubjectPublicKeyInfo / PKCS#1)
///   mldsa-model    1312/2420 size model (ML-DSA-44)
const std::vector<SchemeProfile>& scheme_catalog();
SchemeProfile scheme_by_name(std::string_view name);

/// Loads additional profiles from a JSON config file:
///   [{"name": ..., "public_key_bytes": N, "signature_bytes": N, "executable": false}, ...]
std::vector<SchemeProfile> load_profiles(const std::filesystem::path& file);

/// Deterministic keypair from seed. Throws not_executable for size-model
/// schemes.
KeyPair keygen(const SchemeProfile& scheme, std::string_view seed);

RootSignature sign(const KeyPair& key, std::string_view message, std::string_view signer_id);

/// True iff `signature` is valid for `message` under the verification
/// record. Returns false (never throws) on malformed input.
bool verify(const SchemeProfile& scheme, std::string_view verification_record,
            std::string_view message, std::string_view signature);

// The test scheme is hash-MAC plumbing, not a real signature: the
// verification record hands the verifier the signing token, so anyone who
// can verify can also forge. It exists to keep the pipeline deterministic
// and dependency-free; do not use outside tests and benchmarks.
//   secret     = SHA-256("mtlrpki.ths.sk" || seed)
//   public key = SHA-256(secret)
//   record     = public key || secret
//   signature  = SHA-256(secret || message) || SHA-256(message)
inline constexpr std::string_view kTestScheme = "test-hash-sig";

} // namespace mtlrpki
