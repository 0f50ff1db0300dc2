#include "air/analysis.hpp"

#include <algorithm>

#include "air/error.hpp"
#include "air/unicode.hpp"

namespace air {

namespace {

bool is_word_char(char32_t cp) {
    return unicode::is_letter(cp) || unicode::is_digit(cp) || unicode::is_mark(cp);
}

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\f\v";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            if (pos < text.size()) lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const auto at = s.find(sep, pos);
        if (at == std::string_view::npos) {
            parts.push_back(s.substr(pos));
            return parts;
        }
        parts.push_back(s.substr(pos, at - pos));
        pos = at + 1;
    }
}

std::vector<TermSequence> parse_side(std::string_view side, std::size_t line_no) {
    std::vector<TermSequence> entries;
    for (auto raw : split(side, ',')) {
        const auto entry = trim(raw);
        if (entry.empty()) throw MalformedRule("empty synonym entry", line_no);
        TermSequence terms;
        for (auto& tok : tokenize(entry)) terms.push_back(std::move(tok.term));
        if (terms.empty()) throw MalformedRule("entry has no terms: " + std::string(entry), line_no);
        entries.push_back(std::move(terms));
    }
    return entries;
}

std::size_t count_arrows(std::string_view line) {
    std::size_t n = 0;
    for (auto at = line.find("=>"); at != std::string_view::npos; at = line.find("=>", at + 2)) ++n;
    return n;
}

}  // namespace

// --- SynonymTable ---------------------------------------------------------

SynonymTable::SynonymTable(std::vector<SynonymRule> rules, bool ignore_case, bool expand)
    : rules_(std::move(rules)), ignore_case_(ignore_case), expand_(expand) {
    for (const auto& rule : rules_) {
        if (rule.kind == RuleKind::explicit_mapping) {
            for (const auto& from : rule.lhs)
                for (const auto& to : rule.rhs) add_mapping(from, to);
        } else if (expand_) {
            for (const auto& from : rule.lhs)
                for (const auto& to : rule.lhs) add_mapping(from, to);
        } else {
            for (const auto& from : rule.lhs) add_mapping(from, rule.lhs.front());
        }
    }
}

std::string SynonymTable::key(std::string_view term) const {
    return ignore_case_ ? unicode::fold_case(term) : std::string(term);
}

void SynonymTable::add_mapping(const TermSequence& from, const TermSequence& to) {
    std::vector<std::string> from_key;
    from_key.reserve(from.size());
    for (const auto& t : from) from_key.push_back(key(t));

    auto& outputs = lookup_[from_key];
    const auto same = [&](const TermSequence& existing) {
        if (existing.size() != to.size()) return false;
        for (std::size_t i = 0; i < to.size(); ++i)
            if (key(existing[i]) != key(to[i])) return false;
        return true;
    };
    if (std::none_of(outputs.begin(), outputs.end(), same)) outputs.push_back(to);
    max_lhs_terms_ = std::max(max_lhs_terms_, from.size());
}

std::optional<SynonymTable::Match> SynonymTable::longest_match(std::span<const Token> tokens) const {
    const auto longest = std::min(max_lhs_terms_, tokens.size());
    std::vector<std::string> probe;
    probe.reserve(longest);
    for (std::size_t i = 0; i < longest; ++i) probe.push_back(key(tokens[i].term));
    for (auto len = longest; len > 0; --len) {
        probe.resize(len);
        if (auto it = lookup_.find(probe); it != lookup_.end()) return Match{len, &it->second};
    }
    return std::nullopt;
}

// --- filters --------------------------------------------------------------

TokenStream tokenize(std::string_view text) {
    const auto cps = unicode::decode(text);
    const auto n = cps.size();
    TokenStream tokens;
    std::size_t i = 0;
    while (i < n) {
        if (!unicode::is_letter(cps[i]) && !unicode::is_digit(cps[i])) {
            ++i;
            continue;
        }
        auto j = i + 1;
        while (j < n) {
            if (is_word_char(cps[j])) {
                ++j;
            } else if (unicode::is_apostrophe(cps[j]) && unicode::is_letter(cps[j - 1]) && j + 1 < n &&
                       unicode::is_letter(cps[j + 1])) {
                j += 2;
            } else {
                break;
            }
        }
        tokens.push_back(Token{unicode::encode(std::u32string_view(cps).substr(i, j - i)), i, j,
                               tokens.size(), false});
        i = j;
    }
    return tokens;
}

TokenStream apply_lowercase(TokenStream tokens) {
    for (auto& t : tokens) t.term = unicode::to_lower(t.term);
    return tokens;
}

std::set<std::string> parse_stopword_file(std::string_view text) {
    std::set<std::string> words;
    for (auto line : split_lines(text)) {
        const auto term = trim(line);
        if (term.empty() || term.front() == '#') continue;
        words.insert(unicode::fold_case(term));
    }
    return words;
}

TokenStream apply_stopwords(TokenStream tokens, const std::set<std::string>& stopset) {
    if (stopset.empty()) return tokens;
    std::erase_if(tokens, [&](const Token& t) { return stopset.contains(unicode::fold_case(t.term)); });
    return tokens;
}

SynonymTable parse_synonym_rules(std::string_view text, bool ignore_case, bool expand) {
    std::vector<SynonymRule> rules;
    std::size_t line_no = 0;
    for (auto raw : split_lines(text)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;

        const auto arrows = count_arrows(line);
        if (arrows > 1) throw MalformedRule("more than one \"=>\"", line_no);
        if (arrows == 1) {
            const auto at = line.find("=>");
            const auto left = trim(line.substr(0, at));
            const auto right = trim(line.substr(at + 2));
            if (left.empty() || right.empty()) throw MalformedRule("empty side of \"=>\"", line_no);
            rules.push_back({RuleKind::explicit_mapping, parse_side(left, line_no), parse_side(right, line_no)});
        } else {
            auto members = parse_side(line, line_no);
            if (members.size() < 2) throw MalformedRule("equivalence needs at least two entries", line_no);
            rules.push_back({RuleKind::equivalence, std::move(members), {}});
        }
    }
    return SynonymTable(std::move(rules), ignore_case, expand);
}

TokenStream apply_synonyms(TokenStream tokens, const SynonymTable& table) {
    if (table.empty()) return tokens;

    TokenStream out;
    out.reserve(tokens.size());
    std::size_t i = 0;
    while (i < tokens.size()) {
        const auto rest = std::span<const Token>(tokens).subspan(i);
        const auto match = table.longest_match(rest);
        if (!match) {
            out.push_back(std::move(tokens[i]));
            ++i;
            continue;
        }

        const auto span = rest.first(match->length);
        const auto group_begin = out.size();
        for (const auto& seq : *match->outputs) {
            bool is_original = seq.size() == span.size();
            for (std::size_t k = 0; is_original && k < seq.size(); ++k)
                is_original = table.key(seq[k]) == table.key(span[k].term);

            if (is_original) {
                out.insert(out.end(), span.begin(), span.end());
                continue;
            }
            for (const auto& term : seq)
                out.push_back(Token{term, span.front().start, span.back().end, span.front().position, true});
        }
        std::stable_sort(out.begin() + static_cast<std::ptrdiff_t>(group_begin), out.end(),
                         [](const Token& a, const Token& b) { return a.position < b.position; });
        i += match->length;
    }
    return out;
}

// --- chain ----------------------------------------------------------------

bool AnalyzerConfig::synonyms_active(AnalysisMode mode) const {
    if (!synonyms) return false;
    switch (synonym_mode) {
        case SynonymMode::off: return false;
        case SynonymMode::query_only: return mode == AnalysisMode::query;
        case SynonymMode::index_and_query: return true;
    }
    return false;
}

TokenStream analyze(std::string_view text, const AnalyzerConfig& config, AnalysisMode mode) {
    auto tokens = apply_stopwords(tokenize(text), config.stopwords);
    if (config.synonyms_active(mode)) tokens = apply_synonyms(std::move(tokens), *config.synonyms);
    return apply_lowercase(std::move(tokens));
}

std::vector<std::string> analyze_terms(std::string_view text, const AnalyzerConfig& config, AnalysisMode mode) {
    std::vector<std::string> terms;
    for (auto& t : analyze(text, config, mode)) terms.push_back(std::move(t.term));
    return terms;
}

AnalyzerConfig without_synonyms(const AnalyzerConfig& config) {
    AnalyzerConfig copy = config;
    copy.synonym_mode = SynonymMode::off;
    return copy;
}

Sha256 index_fingerprint(const AnalyzerConfig& config) {
    // Field separator 0x1f, record separator 0x1e.
    std::string canon = "air-analyzer-v1\x1e";
    canon += "stopwords";
    for (const auto& w : config.stopwords) canon += "\x1f" + w;
    canon += "\x1e";
    if (config.synonyms_active(AnalysisMode::index)) {
        const auto& table = *config.synonyms;
        canon += table.ignore_case() ? "ignore_case=1" : "ignore_case=0";
        canon += table.expand() ? "\x1f" "expand=1" : "\x1f" "expand=0";
        for (const auto& rule : table.rules()) {
            canon += rule.kind == RuleKind::explicit_mapping ? "\x1e" "E" : "\x1e" "Q";
            for (const auto* side : {&rule.lhs, &rule.rhs}) {
                canon += "\x1f|";
                for (const auto& entry : *side) {
                    canon += "\x1f";
                    for (const auto& term : entry) canon += term + " ";
                }
            }
        }
    } else {
        canon += "no-index-synonyms";
    }
    return sha256(canon);
}

const char* to_string(SynonymMode mode) {
    switch (mode) {
        case SynonymMode::query_only: return "query_only";
        case SynonymMode::index_and_query: return "index_and_query";
        case SynonymMode::off: return "off";
    }
    return "?";
}

std::optional<SynonymMode> parse_synonym_mode(std::string_view text) {
    if (text == "query_only") return SynonymMode::query_only;
    if (text == "index_and_query") return SynonymMode::index_and_query;
    if (text == "off") return SynonymMode::off;
    return std::nullopt;
}

}  // namespace air
