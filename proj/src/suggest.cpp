#include "air/suggest.hpp"

#include <algorithm>
#include <numeric>

#include "air/error.hpp"
#include "air/unicode.hpp"

namespace air {

void SuggestConfig::validate() const {
    if (max_edit_distance < 1) throw InvalidOptions("max_edit_distance must be >= 1");
    if (max_suggestions < 1) throw InvalidOptions("max_suggestions must be >= 1");
}

namespace {

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

struct Candidate {
    std::size_t distance;
    std::size_t df;
    std::string_view term;
};

bool better(const Candidate& a, const Candidate& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.df != b.df) return a.df > b.df;
    return a.term < b.term;
}

std::optional<std::string> nearest(const Index& index, std::string_view term, std::size_t max_distance) {
    const auto target = unicode::decode(term);
    std::optional<Candidate> best;
    for (const auto& entry : index.terms()) {
        const auto candidate = unicode::decode(entry.term);
        const auto gap = candidate.size() > target.size() ? candidate.size() - target.size()
                                                         : target.size() - candidate.size();
        if (gap > max_distance) continue;
        const auto d = levenshtein(target, candidate);
        if (d > max_distance) continue;
        Candidate c{d, entry.postings.size(), entry.term};
        if (!best || better(c, *best)) best = c;
    }
    if (!best) return std::nullopt;
    return std::string(best->term);
}

}  // namespace

std::size_t edit_distance(std::string_view a, std::string_view b) {
    return levenshtein(unicode::decode(a), unicode::decode(b));
}

std::optional<std::string> did_you_mean(const Index& index, std::span<const std::string> query_terms,
                                        const SuggestConfig& config) {
    bool corrected = false;
    std::string out;
    for (const auto& term : query_terms) {
        if (!out.empty()) out += ' ';
        if (index.doc_frequency(term) > 0) {
            out += term;
            continue;
        }
        if (auto fix = nearest(index, term, config.max_edit_distance)) {
            out += *fix;
            corrected = true;
        } else {
            out += term;
        }
    }
    if (!corrected) return std::nullopt;
    return out;
}

std::vector<std::string> autosuggest(const Index& index, std::string_view prefix, std::size_t k,
                                     const SuggestConfig& config) {
    if (k < 1) throw InvalidOptions("k must be >= 1");
    const auto folded = unicode::fold_case(prefix);
    if (unicode::length(folded) < config.min_prefix_length) return {};

    const auto terms = index.terms();
    auto it = std::lower_bound(terms.begin(), terms.end(), folded,
                               [](const TermPostings& t, const std::string& p) { return t.term < p; });
    std::vector<VocabEntry> matches;
    for (; it != terms.end() && it->term.starts_with(folded); ++it) matches.push_back({it->term, it->postings.size()});

    std::sort(matches.begin(), matches.end(), [](const VocabEntry& a, const VocabEntry& b) {
        if (a.df != b.df) return a.df > b.df;
        return a.term < b.term;
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < matches.size() && i < k; ++i) out.push_back(std::move(matches[i].term));
    return out;
}

}  // namespace air
