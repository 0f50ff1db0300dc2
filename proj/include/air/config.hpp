#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "air/analysis.hpp"
#include "air/error.hpp"
#include "air/search.hpp"
#include "air/suggest.hpp"

namespace air {

/// Bad configuration: unreadable or unparsable config, stopword or synonym
/// file. The message names the file and, where known, the line.
class ConfigError : public Error {
public:
    using Error::Error;
};

struct AppConfig {
    std::optional<std::filesystem::path> corpus;
    std::optional<std::filesystem::path> index;
    std::optional<std::filesystem::path> stopwords;
    std::optional<std::filesystem::path> synonyms;
    std::optional<std::filesystem::path> queries;
    std::optional<std::filesystem::path> qrels;
    std::optional<std::filesystem::path> static_dir;

    bool expand = true;
    bool ignore_case = true;
    SynonymMode synonym_mode = SynonymMode::query_only;

    SearchOptions search;
    SuggestConfig suggest;

    std::string host = "127.0.0.1";
    std::uint16_t port = 8080;
};

/// Reads a JSON config file; relative paths resolve against its directory.
AppConfig load_app_config(const std::filesystem::path& path);

/// Loads the stopword and synonym files named by `config`.
AnalyzerConfig build_analyzer(const AppConfig& config);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace air
