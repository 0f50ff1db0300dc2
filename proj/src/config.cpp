#include "air/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace air {

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

template <typename T>
void take(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void take_path(const nlohmann::json& j, const char* key, const std::filesystem::path& base,
               std::optional<std::filesystem::path>& out) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    std::filesystem::path p = j.at(key).get<std::string>();
    out = p.is_absolute() ? p : base / p;
}

}  // namespace

AppConfig load_app_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const IoFailure& e) {
        throw ConfigError(e.what());
    }

    AppConfig cfg;
    try {
        const auto j = nlohmann::json::parse(text);
        if (!j.is_object()) throw ConfigError(path.string() + ": top level must be an object");
        const auto base = path.parent_path();
        take_path(j, "corpus", base, cfg.corpus);
        take_path(j, "index", base, cfg.index);
        take_path(j, "stopwords", base, cfg.stopwords);
        take_path(j, "synonyms", base, cfg.synonyms);
        take_path(j, "queries", base, cfg.queries);
        take_path(j, "qrels", base, cfg.qrels);
        take_path(j, "static_dir", base, cfg.static_dir);
        take(j, "expand", cfg.expand);
        take(j, "ignore_case", cfg.ignore_case);
        if (j.contains("synonym_mode")) {
            const auto mode = parse_synonym_mode(j.at("synonym_mode").get<std::string>());
            if (!mode) throw ConfigError(path.string() + ": synonym_mode must be query_only, index_and_query or off");
            cfg.synonym_mode = *mode;
        }
        take(j, "k1", cfg.search.k1);
        take(j, "b", cfg.search.b);
        take(j, "pre_tag", cfg.search.pre_tag);
        take(j, "post_tag", cfg.search.post_tag);
        take(j, "snippet_window", cfg.search.snippet_window);
        take(j, "page_size", cfg.search.size);
        take(j, "max_edit_distance", cfg.suggest.max_edit_distance);
        take(j, "max_suggestions", cfg.suggest.max_suggestions);
        take(j, "min_prefix_length", cfg.suggest.min_prefix_length);
        take(j, "host", cfg.host);
        take(j, "port", cfg.port);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    try {
        cfg.search.validate();
        cfg.suggest.validate();
    } catch (const Error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return cfg;
}

AnalyzerConfig build_analyzer(const AppConfig& config) {
    AnalyzerConfig analyzer;
    analyzer.synonym_mode = config.synonym_mode;
    try {
        if (config.stopwords) analyzer.stopwords = parse_stopword_file(read_text_file(*config.stopwords));
        if (config.synonyms) {
            try {
                analyzer.synonyms =
                    parse_synonym_rules(read_text_file(*config.synonyms), config.ignore_case, config.expand);
            } catch (const MalformedRule& e) {
                throw ConfigError(config.synonyms->string() + ": " + e.what());
            }
        }
    } catch (const IoFailure& e) {
        throw ConfigError(e.what());
    }
    return analyzer;
}

}  // namespace air
