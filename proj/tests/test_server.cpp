#include <gtest/gtest.h>

#include <httplib.h>

#include <fstream>
#include <thread>

#include "air/server.hpp"
#include "support/sample.hpp"

using namespace air;
using nlohmann::json;

namespace {

class ServiceTest : public ::testing::Test {
protected:
    void SetUp() override {
        analyzer_ = air::testing::sample_analyzer();
        index_ = std::make_shared<const Index>(air::testing::sample_index(analyzer_));
        service_ = std::make_unique<SearchService>(index_, analyzer_, SearchOptions{}, SuggestConfig{});
    }

    AnalyzerConfig analyzer_;
    std::shared_ptr<const Index> index_;
    std::unique_ptr<SearchService> service_;
};

}  // namespace

TEST_F(ServiceTest, SearchResponseShape) {
    const auto r = service_->handle_search("gaarii", std::nullopt, std::nullopt);
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(r.body["page"], 1);
    EXPECT_EQ(r.body["size"], 10);
    EXPECT_TRUE(r.body["didYouMean"].is_null());
    ASSERT_GE(r.body["total"].get<std::size_t>(), 1u);
    const auto& hit = r.body["hits"][0];
    EXPECT_TRUE(hit["id"].is_string());
    EXPECT_TRUE(hit["score"].is_number());
    EXPECT_NE(hit["snippet"].get<std::string>().find("<em>"), std::string::npos);
}

TEST_F(ServiceTest, SearchMatchesLibrary) {
    const auto r = service_->handle_search("aadaa oromoo", "2", "3");
    ASSERT_EQ(r.status, 200);
    SearchOptions o;
    o.page = 2;
    o.size = 3;
    const auto want = search(*index_, "aadaa oromoo", o, analyzer_, {});
    EXPECT_EQ(r.body["total"], want.total);
    ASSERT_EQ(r.body["hits"].size(), want.hits.size());
    for (std::size_t i = 0; i < want.hits.size(); ++i) EXPECT_EQ(r.body["hits"][i]["id"], want.hits[i].doc);
}

TEST_F(ServiceTest, DidYouMean) {
    const auto r = service_->handle_search("ormiya", std::nullopt, std::nullopt);
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(r.body["didYouMean"], "oromiyaa");
}

TEST_F(ServiceTest, BadRequests) {
    EXPECT_EQ(service_->handle_search(std::nullopt, std::nullopt, std::nullopt).status, 400);
    EXPECT_EQ(service_->handle_search("  ", std::nullopt, std::nullopt).status, 400);
    EXPECT_EQ(service_->handle_search("x", "0", std::nullopt).status, 400);
    EXPECT_EQ(service_->handle_search("x", "-1", std::nullopt).status, 400);
    EXPECT_EQ(service_->handle_search("x", "abc", std::nullopt).status, 400);
    EXPECT_EQ(service_->handle_search("x", std::nullopt, "0").status, 400);
    EXPECT_EQ(service_->handle_search("x", std::nullopt, "101").status, 400);
    EXPECT_EQ(service_->handle_search("x", std::nullopt, "100").status, 200);
    EXPECT_EQ(service_->handle_suggest("or", "0").status, 400);
    EXPECT_TRUE(service_->handle_search("x", "0", std::nullopt).body.contains("error"));
}

TEST_F(ServiceTest, SuggestHealthMessages) {
    const auto s = service_->handle_suggest("oro", "2");
    ASSERT_EQ(s.status, 200);
    EXPECT_EQ(s.body["suggestions"], json(autosuggest(*index_, "oro", 2, {})));
    EXPECT_EQ(service_->handle_suggest("o", std::nullopt).body["suggestions"].size(), 0u);

    const auto h = service_->handle_health();
    EXPECT_EQ(h.body["status"], "ok");
    EXPECT_EQ(h.body["docs"], 20);

    const auto m = service_->handle_messages();
    EXPECT_EQ(m.body["did_you_mean"], "Kan jechuu barbaaddan kanadhaa?");
    for (const char* key : {"no_results", "search_placeholder", "previous_page", "next_page"})
        EXPECT_TRUE(m.body.contains(key)) << key;
}

TEST_F(ServiceTest, SwapIndex) {
    IndexBuilder b;
    b.add_document("only", "gaarii");
    service_->swap_index(std::make_shared<const Index>(b.commit()));
    EXPECT_EQ(service_->handle_health().body["docs"], 1);
    EXPECT_EQ(service_->handle_search("gaarii", std::nullopt, std::nullopt).body["hits"][0]["id"], "only");
}

TEST_F(ServiceTest, LiveHttp) {
    air::testing::TempDir dir;
    std::ofstream(dir / "index.html") << "<html>air</html>";
    ServerConfig cfg;
    cfg.port = 0;
    cfg.static_dir = dir.path();
    HttpServer server(*service_, cfg);
    ASSERT_TRUE(server.bind());
    std::thread loop([&] { server.listen(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", server.port());
    auto res = client.Get("/api/search?q=gaarii&size=2");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
    const auto body = json::parse(res->body);
    EXPECT_LE(body["hits"].size(), 2u);

    res = client.Get("/api/search?q=ormiya");
    ASSERT_TRUE(res);
    EXPECT_EQ(json::parse(res->body)["didYouMean"], "oromiyaa");

    res = client.Get("/api/search?q=x&page=0");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400);

    res = client.Get("/api/suggest?prefix=oro");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);

    res = client.Get("/api/health");
    ASSERT_TRUE(res);
    EXPECT_EQ(json::parse(res->body)["status"], "ok");

    res = client.Get("/api/messages");
    ASSERT_TRUE(res);
    EXPECT_EQ(json::parse(res->body)["did_you_mean"], "Kan jechuu barbaaddan kanadhaa?");

    res = client.Options("/api/search");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 204);

    res = client.Get("/index.html");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->body, "<html>air</html>");

    // Percent-encoded UTF-8 query.
    res = client.Get("/api/search?q=ba%E2%80%99e");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);

    server.stop();
    loop.join();
}

TEST_F(ServiceTest, ConcurrentRequestsDuringSwap) {
    ServerConfig cfg;
    cfg.port = 0;
    HttpServer server(*service_, cfg);
    ASSERT_TRUE(server.bind());
    std::thread loop([&] { server.listen(); });
    server.wait_until_ready();

    std::atomic<int> failures{0};
    std::vector<std::thread> clients;
    for (int c = 0; c < 8; ++c) {
        clients.emplace_back([&] {
            httplib::Client client("127.0.0.1", server.port());
            for (int i = 0; i < 25; ++i) {
                auto res = client.Get("/api/search?q=aadaa%20oromoo");
                if (!res || res->status != 200) {
                    ++failures;
                    continue;
                }
                const auto body = json::parse(res->body);
                if (body["hits"].size() > body["total"].get<std::size_t>()) ++failures;
            }
        });
    }
    for (int i = 0; i < 20; ++i) service_->swap_index(i % 2 ? index_ : std::make_shared<const Index>());
    for (auto& t : clients) t.join();
    EXPECT_EQ(failures.load(), 0);

    server.stop();
    loop.join();
}

TEST(HttpServer, PortInUse) {
    SearchService service(nullptr, {}, {}, {});
    ServerConfig cfg;
    cfg.port = 0;
    HttpServer first(service, cfg);
    ASSERT_TRUE(first.bind());
    ServerConfig again;
    again.port = static_cast<std::uint16_t>(first.port());
    HttpServer second(service, again);
    EXPECT_FALSE(second.bind());
}
