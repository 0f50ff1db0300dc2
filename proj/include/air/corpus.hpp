#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace air {

struct CorpusDocument {
    std::string id;
    std::string text;
};

/// Reads either a directory of UTF-8 ".txt" files (id = file stem) or a
/// line-delimited records file of {"id": ..., "text": ...} objects.
/// Throws IngestError on unreadable input, invalid UTF-8 or a bad record.
std::vector<CorpusDocument> read_corpus(const std::filesystem::path& path);

std::vector<CorpusDocument> parse_records(std::string_view text);

}  // namespace air
