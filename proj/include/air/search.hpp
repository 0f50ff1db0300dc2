#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "air/analysis.hpp"
#include "air/index.hpp"
#include "air/suggest.hpp"

namespace air {

struct SearchOptions {
    double k1 = 1.2;
    double b = 0.75;
    std::size_t page = 1;  // 1-based
    std::size_t size = 10;
    std::string pre_tag = "<em>";
    std::string post_tag = "</em>";
    std::size_t snippet_window = 160;  // code points
    bool escape_markup = true;         // entity-escape snippet text outside the tags

    /// Throws InvalidPage for page 0, InvalidOptions for the other fields.
    void validate() const;
};

struct ScoredDoc {
    DocOrdinal doc = 0;
    double score = 0.0;
    std::vector<std::string> matched_terms;  // sorted, distinct
};

struct Hit {
    std::string doc;
    double score = 0.0;
    std::string snippet;
    std::vector<std::string> matched_terms;

    friend bool operator==(const Hit&, const Hit&) = default;
};

struct SearchResults {
    std::size_t total = 0;
    std::size_t page = 1;
    std::size_t size = 10;
    std::vector<Hit> hits;
    std::optional<std::string> did_you_mean;

    friend bool operator==(const SearchResults&, const SearchResults&) = default;
};

/// Robertson-Sparck Jones idf with +1 smoothing: ln(1 + (N - df + 0.5) / (df + 0.5)).
double bm25_idf(std::size_t df, std::size_t doc_count);

double bm25_score(std::size_t tf, std::size_t df, std::size_t doc_count, double doc_length, double avg_doc_length,
                  double k1, double b);

/// Disjunctive BM25 retrieval. Repeated terms count once. Ranked by score
/// descending, ties broken by doc id ascending.
std::vector<ScoredDoc> execute_query(const Index& index, std::span<const std::string> query_terms,
                                     const SearchOptions& options);

/// Fragment of `stored_text` around the first match with every in-window
/// match wrapped in the configured tags.
std::string make_snippet(std::string_view stored_text, std::span<const Occurrence> matches,
                         const SearchOptions& options);

/// Full pipeline: QUERY-mode analysis, retrieval, pagination, snippets and
/// did-you-mean for terms absent from the vocabulary.
SearchResults search(const Index& index, std::string_view raw_query, const SearchOptions& options,
                     const AnalyzerConfig& analyzer, const SuggestConfig& suggest);

/// Unpaginated ranked retrieval for `raw_query` (every doc with score > 0).
std::vector<ScoredDoc> retrieve(const Index& index, std::string_view raw_query, const SearchOptions& options,
                                const AnalyzerConfig& analyzer);

}  // namespace air
