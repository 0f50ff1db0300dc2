#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <regex>

#include "air/error.hpp"
#include "air/search.hpp"
#include "support/oracles.hpp"
#include "support/sample.hpp"

using namespace air;

namespace {

Index index_of(const std::vector<oracle::BruteDoc>& docs) {
    IndexBuilder b;
    for (const auto& d : docs) b.add_document(d.id, d.text);
    return b.commit();
}

std::size_t count_of(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + needle.size())) ++n;
    return n;
}

}  // namespace

// --- scoring ----------------------------------------------------------------

TEST(Bm25, IdfValue) {
    EXPECT_NEAR(bm25_idf(2, 3), std::log(1.6), 1e-15);
    EXPECT_GT(bm25_idf(3, 3), 0.0);
}

TEST(Bm25, GoldenScore) {
    const double idf = std::log(1.0 + (3 - 2 + 0.5) / (2 + 0.5));
    const double want = idf * (2 * 2.2) / (2 + 1.2 * (0.25 + 0.75 * 4.0 / 3.0));
    EXPECT_NEAR(want, 0.5908617053374961, 1e-15);
    EXPECT_NEAR(bm25_score(2, 2, 3, 4, 3, 1.2, 0.75), 0.5908617053374961, 1e-12);
}

TEST(Bm25, ZeroBIgnoresLength) {
    for (double dl : {1.0, 5.0, 50.0}) EXPECT_DOUBLE_EQ(bm25_score(3, 1, 10, dl, 7.0, 1.2, 0.0), bm25_score(3, 1, 10, 7.0, 7.0, 1.2, 0.0));
}

TEST(Bm25, ScoreGrowsWithTfAndShrinksWithLength) {
    for (std::size_t tf = 1; tf < 20; ++tf) EXPECT_LT(bm25_score(tf, 2, 10, 5, 5, 1.2, 0.75), bm25_score(tf + 1, 2, 10, 5, 5, 1.2, 0.75));
    EXPECT_GT(bm25_score(2, 2, 10, 3, 5, 1.2, 0.75), bm25_score(2, 2, 10, 9, 5, 1.2, 0.75));
}

TEST(ExecuteQuery, EmptyIndexAndEmptyQuery) {
    const Index empty;
    const std::vector<std::string> q = {"a"};
    EXPECT_TRUE(execute_query(empty, q, {}).empty());
    const auto idx = index_of({{"d1", "a b"}});
    EXPECT_TRUE(execute_query(idx, std::vector<std::string>{}, {}).empty());
}

TEST(ExecuteQuery, SingleMatch) {
    const auto idx = index_of({{"d1", "gadaa seenaa"}, {"d2", "aadaa"}});
    const std::vector<std::string> q = {"aadaa"};
    const auto r = execute_query(idx, q, {});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(idx.document(r[0].doc).id, "d2");
    EXPECT_EQ(r[0].matched_terms, (std::vector<std::string>{"aadaa"}));
}

TEST(ExecuteQuery, TiesBrokenByDocId) {
    const auto idx = index_of({{"c", "x y"}, {"a", "x y"}, {"b", "x y"}});
    const std::vector<std::string> q = {"x"};
    const auto r = execute_query(idx, q, {});
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(idx.document(r[0].doc).id, "a");
    EXPECT_EQ(idx.document(r[1].doc).id, "b");
    EXPECT_EQ(idx.document(r[2].doc).id, "c");
}

TEST(ExecuteQuery, RepeatedQueryTermsCountOnce) {
    const auto idx = index_of({{"d1", "a b"}, {"d2", "b b c"}});
    const std::vector<std::string> once = {"a", "b"};
    const std::vector<std::string> twice = {"b", "a", "b", "a"};
    const auto r1 = execute_query(idx, once, {});
    const auto r2 = execute_query(idx, twice, {});
    ASSERT_EQ(r1.size(), r2.size());
    for (std::size_t i = 0; i < r1.size(); ++i) {
        EXPECT_EQ(r1[i].doc, r2[i].doc);
        EXPECT_EQ(r1[i].score, r2[i].score);
    }
}

TEST(ExecuteQuery, AgreesWithBruteForceOnRandomCorpora) {
    std::mt19937 rng(99);
    const std::vector<std::string> alphabet = {"a", "b", "c", "d", "e", "f", "g", "h"};
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> len(1, 10);
    std::uniform_int_distribution<int> ndocs(1, 12);
    for (int round = 0; round < 300; ++round) {
        std::vector<oracle::BruteDoc> docs;
        for (int i = ndocs(rng); i > 0; --i) {
            std::string text;
            for (int k = len(rng); k > 0; --k) text += alphabet[pick(rng)] + " ";
            docs.push_back({"d" + std::to_string(100 + docs.size()), text});
        }
        std::vector<std::string> query;
        for (int k = len(rng) % 4 + 1; k > 0; --k) query.push_back(alphabet[pick(rng)]);
        const auto idx = index_of(docs);
        const auto got = execute_query(idx, query, {});
        const auto want = oracle::brute_bm25(docs, query);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_EQ(idx.document(got[i].doc).id, want[i].id);
            EXPECT_NEAR(got[i].score, want[i].score, 1e-9 * std::abs(want[i].score));
        }
    }
}

// --- snippets ---------------------------------------------------------------

TEST(Snippet, WrapsMatch) {
    const std::vector<Occurrence> m = {{6, 11}};
    EXPECT_EQ(make_snippet("sirna gadaa oromoo", m, {}), "sirna <em>gadaa</em> oromoo");
}

TEST(Snippet, NoMatchesShowsLeadingText) {
    SearchOptions o;
    o.snippet_window = 5;
    EXPECT_EQ(make_snippet("sirna gadaa oromoo", {}, o), "sirna…");
    EXPECT_EQ(make_snippet("", {}, o), "");
}

TEST(Snippet, CustomTagsAndEscaping) {
    SearchOptions o;
    o.pre_tag = "[";
    o.post_tag = "]";
    const std::vector<Occurrence> m = {{0, 4}};
    EXPECT_EQ(make_snippet("ba'e <b> & x", m, o), "[ba&#39;e] &lt;b&gt; &amp; x");
    o.escape_markup = false;
    EXPECT_EQ(make_snippet("ba'e <b> & x", m, o), "[ba'e] <b> & x");
}

TEST(Snippet, WindowCentredOnFirstMatchWithEllipses) {
    SearchOptions o;
    o.snippet_window = 12;
    const std::string text = "aaaa bbbb cccc dddd eeee ffff gggg";
    const std::vector<Occurrence> m = {{15, 19}};
    EXPECT_EQ(make_snippet(text, m, o), "…cccc <em>dddd</em> eeee…");
}

TEST(Snippet, OverlappingMatchesMerged) {
    const std::vector<Occurrence> m = {{0, 8}, {0, 15}, {9, 15}};
    EXPECT_EQ(make_snippet("magaalaa guddoo", m, {}), "<em>magaalaa guddoo</em>");
}

TEST(Snippet, CodePointOffsets) {
    const std::vector<Occurrence> m = {{5, 10}};
    EXPECT_EQ(make_snippet("ba’e Ámaan", m, {}), "ba’e <em>Ámaan</em>");
}

TEST(Snippet, TagCountMatchesInWindowOccurrences) {
    const auto idx = air::testing::sample_index(air::testing::sample_analyzer());
    std::mt19937 rng(4);
    SearchOptions o;
    for (std::size_t window : {20u, 60u, 160u, 1000u}) {
        o.snippet_window = window;
        for (const auto& t : idx.terms()) {
            for (const auto& p : t.postings) {
                const auto s = make_snippet(idx.document(p.doc).text, p.occurrences, o);
                const auto opens = count_of(s, "<em>");
                EXPECT_EQ(opens, count_of(s, "</em>"));
                EXPECT_GE(opens, 1u) << t.term;
                EXPECT_LE(opens, p.occurrences.size());
                if (window == 1000u) EXPECT_EQ(opens, p.occurrences.size());
            }
        }
    }
}

// --- search -----------------------------------------------------------------

TEST(Search, InvalidPage) {
    SearchOptions o;
    o.page = 0;
    EXPECT_THROW((void)search(Index{}, "x", o, {}, {}), InvalidPage);
    o.page = 1;
    o.size = 0;
    EXPECT_THROW((void)search(Index{}, "x", o, {}, {}), InvalidOptions);
    o.size = 10;
    o.b = 1.5;
    EXPECT_THROW((void)search(Index{}, "x", o, {}, {}), InvalidOptions);
}

TEST(Search, EmptyAndStopwordOnlyQuery) {
    const auto cfg = air::testing::sample_analyzer();
    const auto idx = air::testing::sample_index(cfg);
    for (const char* q : {"", "   ", "fi", "fi kan"}) {
        const auto r = search(idx, q, {}, cfg, {});
        EXPECT_EQ(r.total, 0u) << q;
        EXPECT_TRUE(r.hits.empty());
        EXPECT_FALSE(r.did_you_mean);
    }
}

TEST(Search, PageBeyondEnd) {
    const auto cfg = air::testing::sample_analyzer();
    const auto idx = air::testing::sample_index(cfg);
    SearchOptions o;
    o.page = 1000;
    const auto r = search(idx, "oromoo", o, cfg, {});
    EXPECT_GT(r.total, 0u);
    EXPECT_TRUE(r.hits.empty());
    o.page = std::numeric_limits<std::size_t>::max();
    o.size = std::numeric_limits<std::size_t>::max();
    EXPECT_TRUE(search(idx, "oromoo", o, cfg, {}).hits.empty());
}

TEST(Search, PagesConcatenateToFullRanking) {
    const auto cfg = air::testing::sample_analyzer();
    const auto idx = air::testing::sample_index(cfg);
    const std::vector<std::string> vocab = [&] {
        std::vector<std::string> v;
        for (const auto& t : idx.terms()) v.push_back(t.term);
        return v;
    }();
    std::mt19937 rng(17);
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    std::uniform_int_distribution<std::size_t> size_dist(1, 7);
    for (int round = 0; round < 50; ++round) {
        std::string q = vocab[pick(rng)] + " " + vocab[pick(rng)] + " " + vocab[pick(rng)];
        const auto full = retrieve(idx, q, {}, cfg);
        SearchOptions o;
        o.size = size_dist(rng);
        std::vector<std::string> all;
        for (o.page = 1;; ++o.page) {
            const auto r = search(idx, q, o, cfg, {});
            EXPECT_EQ(r.total, full.size());
            if (r.hits.empty()) break;
            EXPECT_LE(r.hits.size(), o.size);
            for (const auto& h : r.hits) all.push_back(h.doc);
        }
        ASSERT_EQ(all.size(), full.size()) << q;
        for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], idx.document(full[i].doc).id);
    }
}

TEST(Search, ExplicitRuleAndDidYouMean) {
    const auto cfg = air::testing::sample_analyzer();
    const auto idx = air::testing::sample_index(cfg);
    const auto r = search(idx, "ormiya", {}, cfg, {});
    EXPECT_GT(r.total, 0u);
    ASSERT_TRUE(r.did_you_mean);
    EXPECT_EQ(*r.did_you_mean, "oromiyaa");
    for (const auto& h : r.hits) EXPECT_EQ(h.matched_terms, (std::vector<std::string>{"oromiyaa"}));
}

TEST(Search, InVocabularyQueryHasNoSuggestion) {
    const auto cfg = air::testing::sample_analyzer();
    const auto idx = air::testing::sample_index(cfg);
    for (const auto& t : idx.terms()) EXPECT_FALSE(search(idx, t.term, {}, cfg, {}).did_you_mean) << t.term;
}

TEST(Search, SnippetsHighlightMatchedTerms) {
    const auto cfg = air::testing::sample_analyzer();
    const auto idx = air::testing::sample_index(cfg);
    const auto r = search(idx, "gaarii", {}, cfg, {});
    ASSERT_FALSE(r.hits.empty());
    for (const auto& h : r.hits) EXPECT_NE(h.snippet.find("<em>"), std::string::npos) << h.doc;
}
