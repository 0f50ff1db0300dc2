#include "air/search.hpp"

#include <algorithm>
#include <cmath>

#include "air/error.hpp"
#include "air/unicode.hpp"

namespace air {

void SearchOptions::validate() const {
    if (page < 1) throw InvalidPage("page must be >= 1");
    if (size < 1) throw InvalidOptions("size must be >= 1");
    if (!(k1 >= 0.0) || !std::isfinite(k1)) throw InvalidOptions("k1 must be >= 0");
    if (!(b >= 0.0 && b <= 1.0)) throw InvalidOptions("b must be within [0, 1]");
}

double bm25_idf(std::size_t df, std::size_t doc_count) {
    const auto n = static_cast<double>(doc_count);
    const auto d = static_cast<double>(df);
    return std::log1p((n - d + 0.5) / (d + 0.5));
}

double bm25_score(std::size_t tf, std::size_t df, std::size_t doc_count, double doc_length, double avg_doc_length,
                  double k1, double b) {
    const auto f = static_cast<double>(tf);
    const double norm = k1 * (1.0 - b + b * doc_length / avg_doc_length);
    return bm25_idf(df, doc_count) * f * (k1 + 1.0) / (f + norm);
}

std::vector<ScoredDoc> execute_query(const Index& index, std::span<const std::string> query_terms,
                                     const SearchOptions& options) {
    std::vector<std::string> terms(query_terms.begin(), query_terms.end());
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

    const auto n = index.doc_count();
    if (n == 0) return {};
    const double avgdl = index.avg_doc_length();
    const auto docs = index.documents();

    std::vector<double> scores(n, 0.0);
    std::vector<std::vector<std::size_t>> matched(n);
    std::vector<DocOrdinal> touched;
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const auto list = index.postings(terms[t]);
        for (const auto& p : list) {
            if (matched[p.doc].empty()) touched.push_back(p.doc);
            scores[p.doc] += bm25_score(p.tf(), list.size(), n, static_cast<double>(docs[p.doc].length), avgdl,
                                        options.k1, options.b);
            matched[p.doc].push_back(t);
        }
    }

    std::vector<ScoredDoc> out;
    out.reserve(touched.size());
    for (auto doc : touched) {
        ScoredDoc s{doc, scores[doc], {}};
        for (auto t : matched[doc]) s.matched_terms.push_back(terms[t]);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc < b.doc;
    });
    return out;
}

namespace {

void append_escaped(std::string& out, std::u32string_view text, bool escape) {
    for (char32_t cp : text) {
        if (escape) {
            switch (cp) {
                case U'&': out += "&amp;"; continue;
                case U'<': out += "&lt;"; continue;
                case U'>': out += "&gt;"; continue;
                case U'"': out += "&quot;"; continue;
                case U'\'': out += "&#39;"; continue;
                default: break;
            }
        }
        unicode::append(out, cp);
    }
}

bool is_space(char32_t cp) { return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f' || cp == U'\v'; }

}  // namespace

std::string make_snippet(std::string_view stored_text, std::span<const Occurrence> matches,
                         const SearchOptions& options) {
    const auto cps = unicode::decode(stored_text);
    const std::size_t n = cps.size();
    const std::size_t window = std::max<std::size_t>(options.snippet_window, 1);

    std::vector<Occurrence> spans;
    for (const auto& m : matches) {
        if (m.start < m.end && m.end <= n) spans.push_back(m);
    }
    std::sort(spans.begin(), spans.end());
    std::vector<Occurrence> merged;
    for (const auto& m : spans) {
        if (!merged.empty() && m.start < merged.back().end) {
            merged.back().end = std::max(merged.back().end, m.end);
        } else {
            merged.push_back(m);
        }
    }

    std::size_t begin = 0;
    std::size_t end = std::min(n, window);
    if (!merged.empty()) {
        const auto& first = merged.front();
        const std::size_t center = (first.start + first.end) / 2;
        begin = center > window / 2 ? center - window / 2 : 0;
        end = std::min(n, begin + window);
        if (end - begin < window) begin = end > window ? end - window : 0;
        begin = std::min<std::size_t>(begin, first.start);
        end = std::max<std::size_t>(end, first.end);
    }

    // Never cut a token in half.
    for (const auto& tok : tokenize(stored_text)) {
        if (tok.start < begin && begin < tok.end) begin = tok.start;
        if (tok.start < end && end < tok.end) end = tok.end;
    }
    while (begin < end && is_space(cps[begin])) ++begin;
    while (end > begin && is_space(cps[end - 1])) --end;

    const auto has_content = [&](std::size_t from, std::size_t to) {
        for (auto i = from; i < to; ++i)
            if (!is_space(cps[i])) return true;
        return false;
    };

    const std::u32string_view all(cps);
    std::string out;
    if (has_content(0, begin)) out += "…";
    std::size_t cursor = begin;
    for (const auto& m : merged) {
        if (m.start < begin || m.end > end) continue;
        append_escaped(out, all.substr(cursor, m.start - cursor), options.escape_markup);
        out += options.pre_tag;
        append_escaped(out, all.substr(m.start, m.end - m.start), options.escape_markup);
        out += options.post_tag;
        cursor = m.end;
    }
    append_escaped(out, all.substr(cursor, end - cursor), options.escape_markup);
    if (has_content(end, n)) out += "…";
    return out;
}

std::vector<ScoredDoc> retrieve(const Index& index, std::string_view raw_query, const SearchOptions& options,
                                const AnalyzerConfig& analyzer) {
    const auto terms = analyze_terms(raw_query, analyzer, AnalysisMode::query);
    return execute_query(index, terms, options);
}

SearchResults search(const Index& index, std::string_view raw_query, const SearchOptions& options,
                     const AnalyzerConfig& analyzer, const SuggestConfig& suggest) {
    options.validate();
    suggest.validate();

    const auto ranked = retrieve(index, raw_query, options, analyzer);

    SearchResults results;
    results.total = ranked.size();
    results.page = options.page;
    results.size = options.size;

    const auto skip_pages = options.page - 1;
    const auto first = skip_pages <= ranked.size() / options.size ? skip_pages * options.size : ranked.size();
    for (auto i = first; i < ranked.size() && i - first < options.size; ++i) {
        const auto& r = ranked[i];
        std::vector<Occurrence> occurrences;
        for (const auto& term : r.matched_terms) {
            if (const auto* p = index.find_posting(term, r.doc))
                occurrences.insert(occurrences.end(), p->occurrences.begin(), p->occurrences.end());
        }
        const auto& doc = index.document(r.doc);
        results.hits.push_back(Hit{doc.id, r.score, make_snippet(doc.text, occurrences, options), r.matched_terms});
    }

    const auto plain = analyze_terms(raw_query, without_synonyms(analyzer), AnalysisMode::query);
    const bool unknown_term =
        std::any_of(plain.begin(), plain.end(), [&](const std::string& t) { return index.doc_frequency(t) == 0; });
    if (unknown_term) results.did_you_mean = did_you_mean(index, plain, suggest);
    return results;
}

}  // namespace air
