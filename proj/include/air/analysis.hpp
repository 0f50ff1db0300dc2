#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "air/digest.hpp"

namespace air {

/// One analyzed term occurrence. Offsets are code point offsets into the
/// source text; injected tokens carry the span of the source tokens they
/// were substituted for.
struct Token {
    std::string term;
    std::size_t start = 0;
    std::size_t end = 0;
    std::size_t position = 0;
    bool injected = false;

    friend bool operator==(const Token&, const Token&) = default;
};

using TokenStream = std::vector<Token>;

/// A synonym entry: one or more consecutive terms.
using TermSequence = std::vector<std::string>;

enum class RuleKind { explicit_mapping, equivalence };

struct SynonymRule {
    RuleKind kind = RuleKind::equivalence;
    std::vector<TermSequence> lhs;
    std::vector<TermSequence> rhs;  // explicit_mapping only

    friend bool operator==(const SynonymRule&, const SynonymRule&) = default;
};

/// Parsed synonym rules compiled into a lookup keyed by the (optionally
/// case-folded) left-hand term sequence.
class SynonymTable {
public:
    SynonymTable() = default;
    SynonymTable(std::vector<SynonymRule> rules, bool ignore_case, bool expand);

    [[nodiscard]] const std::vector<SynonymRule>& rules() const noexcept { return rules_; }
    [[nodiscard]] bool ignore_case() const noexcept { return ignore_case_; }
    [[nodiscard]] bool expand() const noexcept { return expand_; }
    [[nodiscard]] bool empty() const noexcept { return lookup_.empty(); }

    struct Match {
        std::size_t length = 0;                        // tokens consumed
        const std::vector<TermSequence>* outputs = nullptr;
    };

    /// Longest rule whose left side matches a prefix of `tokens`.
    [[nodiscard]] std::optional<Match> longest_match(std::span<const Token> tokens) const;

    /// Lookup key form of a term under this table's case setting.
    [[nodiscard]] std::string key(std::string_view term) const;

private:
    void add_mapping(const TermSequence& from, const TermSequence& to);

    std::vector<SynonymRule> rules_;
    bool ignore_case_ = true;
    bool expand_ = true;
    std::size_t max_lhs_terms_ = 0;
    std::map<std::vector<std::string>, std::vector<TermSequence>> lookup_;
};

enum class SynonymMode { query_only, index_and_query, off };
enum class AnalysisMode { index, query };

/// Filter chain configuration. The order is fixed:
/// tokenize -> stopwords -> synonyms -> lowercase.
struct AnalyzerConfig {
    std::set<std::string> stopwords;  // case-folded
    std::optional<SynonymTable> synonyms;
    SynonymMode synonym_mode = SynonymMode::query_only;

    [[nodiscard]] bool synonyms_active(AnalysisMode mode) const;
};

TokenStream tokenize(std::string_view text);
TokenStream apply_lowercase(TokenStream tokens);
std::set<std::string> parse_stopword_file(std::string_view text);
TokenStream apply_stopwords(TokenStream tokens, const std::set<std::string>& stopset);

/// Parses a synonym file. Throws MalformedRule carrying the 1-based line.
SynonymTable parse_synonym_rules(std::string_view text, bool ignore_case, bool expand = true);

TokenStream apply_synonyms(TokenStream tokens, const SynonymTable& table);

TokenStream analyze(std::string_view text, const AnalyzerConfig& config, AnalysisMode mode);

/// Terms of `analyze`, in stream order.
std::vector<std::string> analyze_terms(std::string_view text, const AnalyzerConfig& config,
                                       AnalysisMode mode);

/// Copy of `config` with the synonym filter switched off.
AnalyzerConfig without_synonyms(const AnalyzerConfig& config);

/// SHA-256 over a canonical serialization of everything that affects
/// INDEX-mode analysis (stopwords, and synonyms when applied at index time).
Sha256 index_fingerprint(const AnalyzerConfig& config);

const char* to_string(SynonymMode mode);
std::optional<SynonymMode> parse_synonym_mode(std::string_view text);

}  // namespace air
