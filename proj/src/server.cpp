#include "air/server.hpp"

#include <charconv>
#include <iostream>

#include <httplib.h>

#include "air/error.hpp"
#include "air/version.hpp"

namespace air {

std::map<std::string, std::string> default_messages() {
    return {
        {"did_you_mean", "Kan jechuu barbaaddan kanadhaa?"},
        {"no_results", "Bu'aan hin argamne."},
        {"search_placeholder", "Barbaadi..."},
        {"previous_page", "Duraa"},
        {"next_page", "Itti aanu"},
    };
}

namespace {

ApiResponse bad_request(const std::string& message) { return {400, {{"error", message}}}; }

// Parses a decimal integer parameter; nullopt when absent, error string when bad.
std::optional<long long> parse_int(const std::optional<std::string>& raw, long long fallback, std::string& error,
                                   const char* name) {
    if (!raw || raw->empty()) return fallback;
    long long v = 0;
    const auto* first = raw->data();
    const auto* last = first + raw->size();
    if (auto [ptr, ec] = std::from_chars(first, last, v); ec != std::errc{} || ptr != last) {
        error = std::string(name) + " must be an integer";
        return std::nullopt;
    }
    return v;
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r\n") == std::string::npos; }

}  // namespace

SearchService::SearchService(std::shared_ptr<const Index> index, AnalyzerConfig analyzer, SearchOptions defaults,
                             SuggestConfig suggest, std::map<std::string, std::string> messages)
    : index_(std::move(index)),
      analyzer_(std::move(analyzer)),
      defaults_(std::move(defaults)),
      suggest_(suggest),
      messages_(std::move(messages)) {
    if (!index_) index_ = std::make_shared<const Index>();
}

void SearchService::swap_index(std::shared_ptr<const Index> index) {
    std::lock_guard lock(mutex_);
    index_ = index ? std::move(index) : std::make_shared<const Index>();
}

std::shared_ptr<const Index> SearchService::snapshot() const {
    std::lock_guard lock(mutex_);
    return index_;
}

ApiResponse SearchService::handle_search(const std::optional<std::string>& q, const std::optional<std::string>& page,
                                         const std::optional<std::string>& size) const {
    if (!q || blank(*q)) return bad_request("missing query parameter q");
    std::string error;
    const auto page_v = parse_int(page, 1, error, "page");
    if (!page_v) return bad_request(error);
    const auto size_v = parse_int(size, 10, error, "size");
    if (!size_v) return bad_request(error);
    if (*page_v < 1) return bad_request("page must be >= 1");
    if (*size_v < 1 || *size_v > static_cast<long long>(kMaxPageSize))
        return bad_request("size must be within [1, " + std::to_string(kMaxPageSize) + "]");

    try {
        auto options = defaults_;
        options.page = static_cast<std::size_t>(*page_v);
        options.size = static_cast<std::size_t>(*size_v);
        const auto index = snapshot();
        const auto results = search(*index, *q, options, analyzer_, suggest_);

        nlohmann::json hits = nlohmann::json::array();
        for (const auto& h : results.hits) hits.push_back({{"id", h.doc}, {"score", h.score}, {"snippet", h.snippet}});
        nlohmann::json body = {{"total", results.total},
                               {"page", results.page},
                               {"size", results.size},
                               {"didYouMean", nullptr},
                               {"hits", hits}};
        if (results.did_you_mean) body["didYouMean"] = *results.did_you_mean;
        return {200, body};
    } catch (const std::exception&) {
        return {500, {{"error", "internal error"}}};
    }
}

ApiResponse SearchService::handle_suggest(const std::optional<std::string>& prefix,
                                          const std::optional<std::string>& k) const {
    std::string error;
    const auto k_v = parse_int(k, static_cast<long long>(suggest_.max_suggestions), error, "k");
    if (!k_v) return bad_request(error);
    if (*k_v < 1) return bad_request("k must be >= 1");
    try {
        const auto index = snapshot();
        const auto terms = autosuggest(*index, prefix.value_or(""), static_cast<std::size_t>(*k_v), suggest_);
        return {200, {{"suggestions", terms}}};
    } catch (const std::exception&) {
        return {500, {{"error", "internal error"}}};
    }
}

ApiResponse SearchService::handle_health() const {
    const auto index = snapshot();
    return {200, {{"status", "ok"}, {"docs", index->doc_count()}, {"version", kVersion}}};
}

ApiResponse SearchService::handle_messages() const { return {200, messages_}; }

// --- HTTP binding -----------------------------------------------------------

namespace {

std::optional<std::string> param(const httplib::Request& req, const char* name) {
    if (!req.has_param(name)) return std::nullopt;
    return req.get_param_value(name);
}

void reply(httplib::Response& res, const ApiResponse& api) {
    res.status = api.status;
    res.set_content(api.body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace),
                    "application/json; charset=utf-8");
}

}  // namespace

HttpServer::HttpServer(SearchService& service, ServerConfig config)
    : service_(service), config_(std::move(config)), server_(std::make_unique<httplib::Server>()) {
    auto& svr = *server_;
    // SO_REUSEADDR only: the library default (SO_REUSEPORT) lets a second
    // server share a busy port.
    svr.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    });
    svr.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                             {"Access-Control-Allow-Methods", "GET, OPTIONS"},
                             {"Access-Control-Allow-Headers", "Content-Type"}});

    svr.Get("/api/search", [this](const httplib::Request& req, httplib::Response& res) {
        reply(res, service_.handle_search(param(req, "q"), param(req, "page"), param(req, "size")));
    });
    svr.Get("/api/suggest", [this](const httplib::Request& req, httplib::Response& res) {
        reply(res, service_.handle_suggest(param(req, "prefix"), param(req, "k")));
    });
    svr.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
        reply(res, service_.handle_health());
    });
    svr.Get("/api/messages", [this](const httplib::Request&, httplib::Response& res) {
        reply(res, service_.handle_messages());
    });
    svr.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    if (config_.static_dir) svr.set_mount_point("/", config_.static_dir->string());

    svr.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
        res.status = 500;
        res.set_content(R"({"error":"internal error"})", "application/json; charset=utf-8");
    });

    svr.set_logger([](const httplib::Request& req, const httplib::Response& res) {
        static std::mutex log_mutex;
        std::lock_guard lock(log_mutex);
        std::clog << req.method << ' ' << req.path << ' ' << res.status << '\n';
    });
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::bind() {
    if (config_.port == 0) {
        port_ = server_->bind_to_any_port(config_.host);
        return port_ > 0;
    }
    if (!server_->bind_to_port(config_.host, config_.port)) return false;
    port_ = config_.port;
    return true;
}

bool HttpServer::listen() { return server_->listen_after_bind(); }

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

void HttpServer::stop() {
    if (server_ && server_->is_running()) server_->stop();
}

}  // namespace air
