#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "air/analysis.hpp"
#include "air/digest.hpp"

namespace air {

/// Dense document number, assigned at commit in ascending doc-id order so
/// that ordinal order and doc-id order coincide.
using DocOrdinal = std::uint32_t;

struct Occurrence {
    std::uint64_t start = 0;
    std::uint64_t end = 0;

    friend bool operator==(const Occurrence&, const Occurrence&) = default;
    friend auto operator<=>(const Occurrence&, const Occurrence&) = default;
};

struct Posting {
    DocOrdinal doc = 0;
    std::vector<Occurrence> occurrences;  // tf = occurrences.size()

    [[nodiscard]] std::uint32_t tf() const noexcept { return static_cast<std::uint32_t>(occurrences.size()); }

    friend bool operator==(const Posting&, const Posting&) = default;
};

struct StoredDocument {
    std::string id;
    std::string text;
    std::uint64_t length = 0;  // tokens after INDEX-mode analysis

    friend bool operator==(const StoredDocument&, const StoredDocument&) = default;
};

struct VocabEntry {
    std::string term;
    std::size_t df = 0;

    friend bool operator==(const VocabEntry&, const VocabEntry&) = default;
};

struct TermPostings {
    std::string term;
    std::vector<Posting> postings;  // sorted by doc

    friend bool operator==(const TermPostings&, const TermPostings&) = default;
};

/// Immutable committed inverted index. Obtain one from IndexBuilder::commit
/// or load_index; safe to share across threads.
class Index {
public:
    Index() = default;

    [[nodiscard]] std::size_t doc_count() const noexcept { return docs_.size(); }
    [[nodiscard]] double avg_doc_length() const noexcept { return avgdl_; }
    [[nodiscard]] std::uint64_t total_length() const noexcept { return total_length_; }
    [[nodiscard]] const Sha256& analyzer_fingerprint() const noexcept { return fingerprint_; }

    [[nodiscard]] std::span<const StoredDocument> documents() const noexcept { return docs_; }
    [[nodiscard]] const StoredDocument& document(DocOrdinal doc) const { return docs_.at(doc); }
    [[nodiscard]] std::optional<DocOrdinal> find_document(std::string_view id) const;

    /// Sorted by term.
    [[nodiscard]] std::span<const TermPostings> terms() const noexcept { return terms_; }

    [[nodiscard]] std::size_t doc_frequency(std::string_view term) const;
    [[nodiscard]] std::span<const Posting> postings(std::string_view term) const;
    [[nodiscard]] const Posting* find_posting(std::string_view term, DocOrdinal doc) const;

    [[nodiscard]] std::vector<VocabEntry> vocab() const;

    friend bool operator==(const Index&, const Index&) = default;

private:
    friend class IndexBuilder;
    friend Index deserialize_index(std::string_view bytes);

    Index(std::vector<StoredDocument> docs, std::vector<TermPostings> terms, Sha256 fingerprint);

    const TermPostings* find_term(std::string_view term) const;

    std::vector<StoredDocument> docs_;
    std::vector<TermPostings> terms_;
    std::uint64_t total_length_ = 0;
    double avgdl_ = 0.0;
    Sha256 fingerprint_{};
};

/// Single-writer accumulator for an Index.
class IndexBuilder {
public:
    explicit IndexBuilder(AnalyzerConfig config = {});

    void add_document(std::string id, std::string text);
    [[nodiscard]] Index commit();

    [[nodiscard]] std::size_t size() const noexcept { return pending_.size(); }
    [[nodiscard]] const AnalyzerConfig& config() const noexcept { return config_; }

private:
    struct Pending {
        std::string id;
        std::string text;
        TokenStream tokens;
    };

    AnalyzerConfig config_;
    std::vector<Pending> pending_;
    std::unordered_set<std::string> ids_;
    bool committed_ = false;
};

inline constexpr std::string_view kIndexMagic = "AOIR1";
inline constexpr std::uint32_t kIndexFormatVersion = 1;

void save_index(const Index& index, const std::filesystem::path& path);
Index load_index(const std::filesystem::path& path);

/// In-memory forms of the file format, used by save/load and the tests.
std::string serialize_index(const Index& index);
Index deserialize_index(std::string_view bytes);

}  // namespace air
