#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "air/analysis.hpp"
#include "air/index.hpp"
#include "air/search.hpp"
#include "air/suggest.hpp"

namespace httplib {
class Server;
}

namespace air {

/// UI copy owned by the server. The did-you-mean prompt is the Afaan Oromo
/// "did you mean?".
std::map<std::string, std::string> default_messages();

struct ServerConfig {
    std::string host = "127.0.0.1";
    std::uint16_t port = 8080;
    std::optional<std::filesystem::path> static_dir;
    std::map<std::string, std::string> messages = default_messages();
};

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

inline constexpr std::size_t kMaxPageSize = 100;

/// Request handlers independent of the HTTP transport. Each call works on
/// one immutable index snapshot; swap_index replaces it atomically.
class SearchService {
public:
    SearchService(std::shared_ptr<const Index> index, AnalyzerConfig analyzer, SearchOptions defaults,
                  SuggestConfig suggest, std::map<std::string, std::string> messages = default_messages());

    ApiResponse handle_search(const std::optional<std::string>& q, const std::optional<std::string>& page,
                              const std::optional<std::string>& size) const;
    ApiResponse handle_suggest(const std::optional<std::string>& prefix, const std::optional<std::string>& k) const;
    ApiResponse handle_health() const;
    ApiResponse handle_messages() const;

    void swap_index(std::shared_ptr<const Index> index);
    [[nodiscard]] std::shared_ptr<const Index> snapshot() const;

private:
    mutable std::mutex mutex_;
    std::shared_ptr<const Index> index_;
    AnalyzerConfig analyzer_;
    SearchOptions defaults_;
    SuggestConfig suggest_;
    std::map<std::string, std::string> messages_;
};

/// cpp-httplib binding for SearchService.
class HttpServer {
public:
    HttpServer(SearchService& service, ServerConfig config);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds the configured port (0 = any free port). False when the port
    /// cannot be bound.
    bool bind();
    [[nodiscard]] int port() const noexcept { return port_; }
    /// Blocks until stop() is called.
    bool listen();
    void wait_until_ready() const;
    void stop();

private:
    SearchService& service_;
    ServerConfig config_;
    std::unique_ptr<httplib::Server> server_;
    int port_ = -1;
};

}  // namespace air
