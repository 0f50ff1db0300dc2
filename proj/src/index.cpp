#include "air/index.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "air/error.hpp"

namespace air {

// --- Index ------------------------------------------------------------------

Index::Index(std::vector<StoredDocument> docs, std::vector<TermPostings> terms, Sha256 fingerprint)
    : docs_(std::move(docs)), terms_(std::move(terms)), fingerprint_(fingerprint) {
    for (const auto& d : docs_) total_length_ += d.length;
    avgdl_ = docs_.empty() ? 0.0 : static_cast<double>(total_length_) / static_cast<double>(docs_.size());
}

std::optional<DocOrdinal> Index::find_document(std::string_view id) const {
    const auto it = std::lower_bound(docs_.begin(), docs_.end(), id,
                                     [](const StoredDocument& d, std::string_view v) { return d.id < v; });
    if (it == docs_.end() || it->id != id) return std::nullopt;
    return static_cast<DocOrdinal>(it - docs_.begin());
}

const TermPostings* Index::find_term(std::string_view term) const {
    const auto it = std::lower_bound(terms_.begin(), terms_.end(), term,
                                     [](const TermPostings& t, std::string_view v) { return t.term < v; });
    if (it == terms_.end() || it->term != term) return nullptr;
    return &*it;
}

std::size_t Index::doc_frequency(std::string_view term) const {
    const auto* t = find_term(term);
    return t ? t->postings.size() : 0;
}

std::span<const Posting> Index::postings(std::string_view term) const {
    const auto* t = find_term(term);
    if (!t) return {};
    return t->postings;
}

const Posting* Index::find_posting(std::string_view term, DocOrdinal doc) const {
    const auto list = postings(term);
    const auto it = std::lower_bound(list.begin(), list.end(), doc,
                                     [](const Posting& p, DocOrdinal d) { return p.doc < d; });
    if (it == list.end() || it->doc != doc) return nullptr;
    return &*it;
}

std::vector<VocabEntry> Index::vocab() const {
    std::vector<VocabEntry> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back({t.term, t.postings.size()});
    return out;
}

// --- IndexBuilder -----------------------------------------------------------

IndexBuilder::IndexBuilder(AnalyzerConfig config) : config_(std::move(config)) {}

void IndexBuilder::add_document(std::string id, std::string text) {
    if (committed_) throw CommitAlreadyDone();
    if (ids_.contains(id)) throw DuplicateDocId(id);
    if (pending_.size() >= std::numeric_limits<DocOrdinal>::max()) throw Error("too many documents");
    auto tokens = analyze(text, config_, AnalysisMode::index);
    ids_.insert(id);
    pending_.push_back({std::move(id), std::move(text), std::move(tokens)});
}

Index IndexBuilder::commit() {
    if (committed_) throw CommitAlreadyDone();
    committed_ = true;

    std::sort(pending_.begin(), pending_.end(), [](const Pending& a, const Pending& b) { return a.id < b.id; });

    std::map<std::string, std::vector<Posting>> postings;
    std::vector<StoredDocument> docs;
    docs.reserve(pending_.size());
    for (std::size_t ord = 0; ord < pending_.size(); ++ord) {
        auto& p = pending_[ord];
        std::map<std::string, std::vector<Occurrence>> per_doc;
        for (const auto& tok : p.tokens) per_doc[tok.term].push_back({tok.start, tok.end});
        for (auto& [term, occ] : per_doc) {
            std::sort(occ.begin(), occ.end());
            postings[term].push_back(Posting{static_cast<DocOrdinal>(ord), std::move(occ)});
        }
        docs.push_back({std::move(p.id), std::move(p.text), p.tokens.size()});
    }
    pending_.clear();
    ids_.clear();

    std::vector<TermPostings> terms;
    terms.reserve(postings.size());
    for (auto& [term, list] : postings) terms.push_back({term, std::move(list)});
    return Index(std::move(docs), std::move(terms), index_fingerprint(config_));
}

// --- persistence ------------------------------------------------------------
//
// Layout (all integers little-endian, fixed width):
//   "AOIR1" u32:version [32]:analyzer-fingerprint u64:N f64:avgdl u64:total-length
//   N x { u32:id-bytes id u64:text-bytes text u64:doc-length }
//   u64:term-count, each { u32:term-bytes term u64:df, df x { u32:doc u32:tf, tf x { u64:start u64:end } } }
//   [32]:sha256 of every preceding byte

namespace {

class Writer {
public:
    void bytes(std::string_view s) { out_.append(s); }
    void u32(std::uint32_t v) { fixed(v); }
    void u64(std::uint64_t v) { fixed(v); }
    void f64(double v) { fixed(std::bit_cast<std::uint64_t>(v)); }
    void str32(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes(s);
    }
    void str64(std::string_view s) {
        u64(s.size());
        bytes(s);
    }
    std::string& buffer() { return out_; }

private:
    template <typename T>
    void fixed(T v) {
        for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view in) : in_(in) {}

    std::string_view bytes(std::uint64_t n) {
        if (n > in_.size() - pos_) throw CorruptIndex("index file truncated");
        const auto s = in_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::uint32_t u32() { return fixed<std::uint32_t>(); }
    std::uint64_t u64() { return fixed<std::uint64_t>(); }
    double f64() { return std::bit_cast<double>(fixed<std::uint64_t>()); }
    std::string str32() { return std::string(bytes(u32())); }
    std::string str64() { return std::string(bytes(u64())); }
    [[nodiscard]] bool done() const { return pos_ == in_.size(); }
    [[nodiscard]] std::size_t remaining() const { return in_.size() - pos_; }

private:
    template <typename T>
    T fixed() {
        const auto raw = bytes(sizeof(T));
        T v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<unsigned char>(raw[i])) << (8 * i);
        return v;
    }
    std::string_view in_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_index(const Index& index) {
    Writer w;
    w.bytes(kIndexMagic);
    w.u32(kIndexFormatVersion);
    const auto& fp = index.analyzer_fingerprint();
    w.bytes(std::string_view(reinterpret_cast<const char*>(fp.data()), fp.size()));
    w.u64(index.doc_count());
    w.f64(index.avg_doc_length());
    w.u64(index.total_length());
    for (const auto& d : index.documents()) {
        w.str32(d.id);
        w.str64(d.text);
        w.u64(d.length);
    }
    w.u64(index.terms().size());
    for (const auto& t : index.terms()) {
        w.str32(t.term);
        w.u64(t.postings.size());
        for (const auto& p : t.postings) {
            w.u32(p.doc);
            w.u32(p.tf());
            for (const auto& o : p.occurrences) {
                w.u64(o.start);
                w.u64(o.end);
            }
        }
    }
    const auto digest = sha256(w.buffer());
    w.bytes(std::string_view(reinterpret_cast<const char*>(digest.data()), digest.size()));
    return std::move(w.buffer());
}

Index deserialize_index(std::string_view bytes) {
    constexpr std::size_t kDigest = 32;
    if (bytes.size() < kIndexMagic.size() + 4 || bytes.substr(0, kIndexMagic.size()) != kIndexMagic)
        throw CorruptIndex("not an index file (bad magic)");

    Reader header(bytes.substr(kIndexMagic.size()));
    if (const auto version = header.u32(); version != kIndexFormatVersion)
        throw FormatVersionMismatch("index format version " + std::to_string(version) + ", expected " +
                                    std::to_string(kIndexFormatVersion));

    if (bytes.size() < kIndexMagic.size() + 4 + kDigest) throw CorruptIndex("index file truncated");
    const auto body = bytes.substr(0, bytes.size() - kDigest);
    const auto stored = bytes.substr(bytes.size() - kDigest);
    const auto actual = sha256(body);
    if (std::memcmp(actual.data(), stored.data(), kDigest) != 0) throw CorruptIndex("index digest mismatch");

    Reader r(body.substr(kIndexMagic.size() + 4));
    Sha256 fingerprint{};
    const auto fp = r.bytes(fingerprint.size());
    std::memcpy(fingerprint.data(), fp.data(), fingerprint.size());
    const auto n = r.u64();
    const auto avgdl = r.f64();
    const auto total = r.u64();
    if (n > r.remaining()) throw CorruptIndex("document count exceeds file size");

    std::vector<StoredDocument> docs;
    docs.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        StoredDocument d;
        d.id = r.str32();
        d.text = r.str64();
        d.length = r.u64();
        if (!docs.empty() && !(docs.back().id < d.id)) throw CorruptIndex("document table not sorted");
        docs.push_back(std::move(d));
    }

    const auto term_count = r.u64();
    if (term_count > r.remaining()) throw CorruptIndex("term count exceeds file size");
    std::vector<TermPostings> terms;
    terms.reserve(term_count);
    for (std::uint64_t i = 0; i < term_count; ++i) {
        TermPostings t;
        t.term = r.str32();
        if (!terms.empty() && !(terms.back().term < t.term)) throw CorruptIndex("term dictionary not sorted");
        const auto df = r.u64();
        if (df == 0 || df > n) throw CorruptIndex("bad document frequency for " + t.term);
        t.postings.reserve(df);
        for (std::uint64_t k = 0; k < df; ++k) {
            Posting p;
            p.doc = r.u32();
            const auto tf = r.u32();
            if (p.doc >= n || tf == 0) throw CorruptIndex("bad posting for " + t.term);
            if (!t.postings.empty() && t.postings.back().doc >= p.doc) throw CorruptIndex("postings not sorted");
            if (tf > r.remaining() / 16) throw CorruptIndex("index file truncated");
            p.occurrences.reserve(tf);
            for (std::uint32_t o = 0; o < tf; ++o) {
                const auto start = r.u64();
                const auto end = r.u64();
                if (start > end) throw CorruptIndex("bad occurrence offsets");
                p.occurrences.push_back({start, end});
            }
            t.postings.push_back(std::move(p));
        }
        terms.push_back(std::move(t));
    }
    if (!r.done()) throw CorruptIndex("trailing bytes after term dictionary");

    Index index(std::move(docs), std::move(terms), fingerprint);
    if (index.total_length() != total || index.avg_doc_length() != avgdl)
        throw CorruptIndex("collection statistics disagree with document table");
    return index;
}

void save_index(const Index& index, const std::filesystem::path& path) {
    const auto bytes = serialize_index(index);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoFailure("write failed: " + path.string());
}

Index load_index(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoFailure("read failed: " + path.string());
    return deserialize_index(ss.str());
}

}  // namespace air
