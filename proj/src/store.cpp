#include "mtlrpki/store.hpp"

#include <atomic>
#include <fstream>

#include <nlohmann/json.hpp>

namespace mtlrpki {

namespace fs = std::filesystem;

SnapshotRef SnapshotRef::parse(std::string_view text) {
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    auto dot = text.find('.');
    if (dot == std::string_view::npos) {
        throw Error{Errc::parse_error, "snapshot ref must be <epoch>.<serial>"};
    }
    try {
        return SnapshotRef{std::stoull(std::string{text.substr(0, dot)}),
                           std::stoull(std::string{text.substr(dot + 1)})};
    } catch (const std::exception&) {
        throw Error{Errc::parse_error, "snapshot ref must be numeric"};
    }
}

namespace paths {

fs::path ca_dir(const fs::path& repo, std::string_view ca_id) {
    return repo / ca_id;
}

fs::path snapshot_dir(const fs::path& repo, std::string_view ca_id, const SnapshotRef& ref) {
    return ca_dir(repo, ca_id) / ref.dirname();
}

fs::path current_pointer(const fs::path& repo, std::string_view ca_id) {
    return ca_dir(repo, ca_id) / "current";
}

fs::path ca_state(const fs::path& repo, std::string_view ca_id) {
    return ca_dir(repo, ca_id) / "state.bin";
}

fs::path registry_dir(const fs::path& repo) {
    return repo / "_registry";
}

fs::path trust_anchor(const fs::path& repo) {
    return repo / "trust_anchor.json";
}

} // namespace paths

void atomic_write(const fs::path& path, std::string_view content) {
    static std::atomic<std::uint64_t> counter{0};
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.parent_path() /
        (path.filename().string() + ".tmp." + std::to_string(counter.fetch_add(1)));
    {
        std::ofstream out{tmp, std::ios::binary | std::ios::trunc};
        if (!out) {
            throw Error{Errc::bad_state, "cannot open for write: " + tmp.string()};
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw Error{Errc::bad_state, "short write: " + tmp.string()};
        }
    }
    fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
    std::ifstream in{path, std::ios::binary};
    if (!in) {
        throw Error{Errc::not_found, "cannot open: " + path.string()};
    }
    std::string out;
    out.assign(std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{});
    return out;
}

std::optional<std::string> try_read_file(const fs::path& path) {
    std::ifstream in{path, std::ios::binary};
    if (!in) {
        return std::nullopt;
    }
    std::string out;
    out.assign(std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{});
    return out;
}

bool is_safe_name(std::string_view name) {
    if (name.empty() || name.size() > 255 || name[0] == '.' || name[0] == '_') {
        return false;
    }
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '.' || c == '_' || c == '-';
        if (!ok) {
            return false;
        }
    }
    return true;
}

namespace {
constexpr char kB64Tab[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(std::string_view data) {
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    std::size_t i = 0;
    while (i + 3 <= data.size()) {
        const std::uint32_t v = (static_cast<std::uint8_t>(data[i]) << 16) |
                                (static_cast<std::uint8_t>(data[i + 1]) << 8) |
                                static_cast<std::uint8_t>(data[i + 2]);
        out.push_back(kB64Tab[(v >> 18) & 63]);
        out.push_back(kB64Tab[(v >> 12) & 63]);
        out.push_back(kB64Tab[(v >> 6) & 63]);
        out.push_back(kB64Tab[v & 63]);
        i += 3;
    }
    const std::size_t rem = data.size() - i;
    if (rem == 1) {
        const std::uint32_t v = static_cast<std::uint8_t>(data[i]) << 16;
        out.push_back(kB64Tab[(v >> 18) & 63]);
        out.push_back(kB64Tab[(v >> 12) & 63]);
        out.append("==");
    } else if (rem == 2) {
        const std::uint32_t v = (static_cast<std::uint8_t>(data[i]) << 16) |
                                (static_cast<std::uint8_t>(data[i + 1]) << 8);
        out.push_back(kB64Tab[(v >> 18) & 63]);
        out.push_back(kB64Tab[(v >> 12) & 63]);
        out.push_back(kB64Tab[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

std::string base64_decode(std::string_view text) {
    static const auto value_of = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    if (text.size() % 4 != 0) {
        throw Error{Errc::parse_error, "base64: length not a multiple of 4"};
    }
    std::string out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i < text.size(); i += 4) {
        int vals[4];
        int pad = 0;
        for (int j = 0; j < 4; ++j) {
            const char c = text[i + static_cast<std::size_t>(j)];
            if (c == '=' && i + 4 == text.size() && j >= 2) {
                vals[j] = 0;
                ++pad;
            } else {
                vals[j] = value_of(c);
                if (vals[j] < 0 || pad > 0) {
                    throw Error{Errc::parse_error, "base64: invalid character"};
                }
            }
        }
        const std::uint32_t v = (static_cast<std::uint32_t>(vals[0]) << 18) |
                                (static_cast<std::uint32_t>(vals[1]) << 12) |
                                (static_cast<std::uint32_t>(vals[2]) << 6) |
                                static_cast<std::uint32_t>(vals[3]);
        out.push_back(static_cast<char>((v >> 16) & 0xff));
        if (pad < 2) out.push_back(static_cast<char>((v >> 8) & 0xff));
        if (pad < 1) out.push_back(static_cast<char>(v & 0xff));
    }
    return out;
}

namespace {

nlohmann::json parse_json(std::string_view text, const char* what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error{Errc::parse_error, std::string{what} + ": " + e.what()};
    }
}

std::vector<std::uint64_t> u64s(const nlohmann::json& arr) {
    std::vector<std::uint64_t> out;
    for (const auto& v : arr) {
        out.push_back(v.get<std::uint64_t>());
    }
    return out;
}

} // namespace

std::string CaRootRecord::to_json() const {
    nlohmann::json j;
    j["ca_id"] = ca_id;
    j["epoch"] = epoch;
    j["serial"] = serial;
    j["ladder_root"] = to_hex(ladder_root);
    j["rung_descriptor"] = rung_descriptor;
    j["mode"] = mode;
    if (!parent.empty()) {
        j["parent"] = parent;
    }
    if (!scheme.empty()) {
        j["scheme"] = scheme;
        j["signer_id"] = signer_id;
        j["signature"] = base64_encode(signature);
    }
    if (!rung_roots.empty()) {
        nlohmann::json roots = nlohmann::json::array();
        for (const auto& r : rung_roots) {
            roots.push_back(to_hex(r));
        }
        j["rung_roots"] = roots;
    }
    return j.dump();
}

CaRootRecord CaRootRecord::from_json(std::string_view text) {
    auto j = parse_json(text, "ca root record");
    CaRootRecord rec;
    try {
        rec.ca_id = j.at("ca_id").get<std::string>();
        rec.epoch = j.at("epoch").get<std::uint64_t>();
        rec.serial = j.at("serial").get<std::uint64_t>();
        rec.ladder_root = digest_from_hex(j.at("ladder_root").get<std::string>());
        rec.rung_descriptor = u64s(j.at("rung_descriptor"));
        rec.mode = j.at("mode").get<std::string>();
        rec.parent = j.value("parent", "");
        rec.scheme = j.value("scheme", "");
        rec.signer_id = j.value("signer_id", "");
        if (j.contains("signature")) {
            rec.signature = base64_decode(j.at("signature").get<std::string>());
        }
        if (j.contains("rung_roots")) {
            for (const auto& r : j.at("rung_roots")) {
                rec.rung_roots.push_back(digest_from_hex(r.get<std::string>()));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error{Errc::parse_error, std::string{"ca root record: "} + e.what()};
    } catch (const std::invalid_argument& e) {
        throw Error{Errc::parse_error, std::string{"ca root record: "} + e.what()};
    }
    return rec;
}

std::string RegistryRootRecord::to_json() const {
    nlohmann::json j;
    j["registry_id"] = registry_id;
    j["epoch"] = epoch;
    j["serial"] = serial;
    j["aggregate_root"] = to_hex(aggregate_root);
    j["scheme"] = scheme;
    j["signer_id"] = signer_id;
    j["signature"] = base64_encode(signature);
    return j.dump();
}

RegistryRootRecord RegistryRootRecord::from_json(std::string_view text) {
    auto j = parse_json(text, "registry root record");
    RegistryRootRecord rec;
    try {
        rec.registry_id = j.at("registry_id").get<std::string>();
        rec.epoch = j.at("epoch").get<std::uint64_t>();
        rec.serial = j.at("serial").get<std::uint64_t>();
        rec.aggregate_root = digest_from_hex(j.at("aggregate_root").get<std::string>());
        rec.scheme = j.at("scheme").get<std::string>();
        rec.signer_id = j.at("signer_id").get<std::string>();
        rec.signature = base64_decode(j.at("signature").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw Error{Errc::parse_error, std::string{"registry root record: "} + e.what()};
    } catch (const std::invalid_argument& e) {
        throw Error{Errc::parse_error, std::string{"registry root record: "} + e.what()};
    }
    return rec;
}

std::string TrustAnchor::to_json() const {
    nlohmann::json j;
    j["registry_id"] = registry_id;
    j["scheme"] = scheme;
    j["verification_record"] = base64_encode(verification_record);
    return j.dump();
}

TrustAnchor TrustAnchor::from_json(std::string_view text) {
    auto j = parse_json(text, "trust anchor");
    TrustAnchor ta;
    try {
        ta.registry_id = j.at("registry_id").get<std::string>();
        ta.scheme = j.at("scheme").get<std::string>();
        ta.verification_record = base64_decode(j.at("verification_record").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw Error{Errc::parse_error, std::string{"trust anchor: "} + e.what()};
    }
    return ta;
}

TrustAnchor TrustAnchor::from_file(const std::filesystem::path& path) {
    return from_json(read_file(path));
}

} // namespace mtlrpki
