#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "mtlrpki/errors.hpp"

namespace mtlrpki {

struct FetchResult {
    int status = 0; // 200/404/500, transport failures throw instead
    std::string body;

    bool ok() const { return status == 200; }
};

/// Read-side interface of a publication point. Both the HTTP client and the
/// in-process loopback speak the same routes:
///   /registry/root, /registry/listing,
///   /ca/{id}/root, /ca/{id}/manifest, /ca/{id}/crl,
///   /ca/{id}/obj/{name}, /ca/{id}/path/{name}
class Transport {
public:
    virtual ~Transport() = default;
    virtual FetchResult get(const std::string& path) = 0;
};

/// Resolves one route against an on-disk repository. Every response for a
/// CA route is read from the snapshot its `current` pointer named at
/// resolution time, so a response never mixes snapshots.
FetchResult resolve_route(const std::filesystem::path& repo, const std::string& path);

/// Loopback transport for deterministic tests: no sockets, same routing
/// logic as the HTTP server.
class LocalTransport : public Transport {
public:
    explicit LocalTransport(std::filesystem::path repo) : repo_(std::move(repo)) {}
    FetchResult get(const std::string& path) override { return resolve_route(repo_, path); }

private:
    std::filesystem::path repo_;
};

class HttpTransport : public Transport {
public:
    HttpTransport(const std::string& host, int port, int timeout_seconds = 10);
    ~HttpTransport() override;
    FetchResult get(const std::string& path) override; // throws transport_error

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Minimal publication-point server over a repository directory.
class PpServer {
public:
    explicit PpServer(std::filesystem::path repo);
    ~PpServer();

    /// Binds and serves on a background thread; returns the bound port.
    /// port 0 picks an ephemeral port. Throws bind_failure.
    int start(const std::string& host, int port);
    void stop();
    int port() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace mtlrpki
