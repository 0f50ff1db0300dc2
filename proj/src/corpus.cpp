#include "air/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "air/error.hpp"
#include "air/unicode.hpp"

namespace air {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::vector<CorpusDocument> parse_records(std::string_view text) {
    std::vector<CorpusDocument> docs;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

        const auto where = "record line " + std::to_string(line_no) + ": ";
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw IngestError(where + e.what());
        }
        if (!record.is_object() || !record.contains("id") || !record.contains("text") ||
            !record["id"].is_string() || !record["text"].is_string()) {
            throw IngestError(where + "expected an object with string fields \"id\" and \"text\"");
        }
        docs.push_back({record["id"].get<std::string>(), record["text"].get<std::string>()});
    }
    return docs;
}

std::vector<CorpusDocument> read_corpus(const std::filesystem::path& path) {
    std::error_code ec;
    std::vector<CorpusDocument> docs;
    if (std::filesystem::is_directory(path, ec)) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(path, ec)) {
            if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
        }
        if (ec) throw IngestError("cannot list " + path.string() + ": " + ec.message());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) docs.push_back({f.stem().string(), read_file(f)});
    } else if (std::filesystem::is_regular_file(path, ec)) {
        docs = parse_records(read_file(path));
    } else {
        throw IngestError("corpus not found: " + path.string());
    }
    for (const auto& d : docs) {
        if (!unicode::is_valid(d.text) || !unicode::is_valid(d.id))
            throw IngestError("document " + d.id + " is not valid UTF-8");
    }
    return docs;
}

}  // namespace air
