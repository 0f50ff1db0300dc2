#include "air/cli.hpp"

#include <csignal>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <pthread.h>
#include <thread>

#include <CLI11.hpp>

#include "air/config.hpp"
#include "air/corpus.hpp"
#include "air/eval.hpp"
#include "air/index.hpp"
#include "air/search.hpp"
#include "air/server.hpp"
#include "air/suggest.hpp"
#include "air/unicode.hpp"

namespace air {

namespace {

using Path = std::filesystem::path;

/// Flag values; anything set here overrides the config file.
struct Overrides {
    std::string config;
    std::optional<std::string> corpus, index, stopwords, synonyms, queries, qrels, static_dir;
    std::optional<std::string> synonym_mode;
    bool no_expand = false;
    bool case_sensitive = false;
    std::optional<double> k1, b;
    std::optional<std::string> pre_tag, post_tag;
    std::optional<std::size_t> snippet_window;
    std::optional<std::size_t> max_edit_distance, min_prefix_length;
    std::optional<std::string> host;
    std::optional<int> port;
};

AppConfig resolve(const Overrides& o) {
    AppConfig cfg = o.config.empty() ? AppConfig{} : load_app_config(o.config);
    const auto set_path = [](std::optional<Path>& dst, const std::optional<std::string>& src) {
        if (src) dst = Path(*src);
    };
    set_path(cfg.corpus, o.corpus);
    set_path(cfg.index, o.index);
    set_path(cfg.stopwords, o.stopwords);
    set_path(cfg.synonyms, o.synonyms);
    set_path(cfg.queries, o.queries);
    set_path(cfg.qrels, o.qrels);
    set_path(cfg.static_dir, o.static_dir);
    if (o.synonym_mode) {
        const auto mode = parse_synonym_mode(*o.synonym_mode);
        if (!mode) throw ConfigError("--synonym-mode must be query_only, index_and_query or off");
        cfg.synonym_mode = *mode;
    }
    if (o.no_expand) cfg.expand = false;
    if (o.case_sensitive) cfg.ignore_case = false;
    if (o.k1) cfg.search.k1 = *o.k1;
    if (o.b) cfg.search.b = *o.b;
    if (o.pre_tag) cfg.search.pre_tag = *o.pre_tag;
    if (o.post_tag) cfg.search.post_tag = *o.post_tag;
    if (o.snippet_window) cfg.search.snippet_window = *o.snippet_window;
    if (o.max_edit_distance) cfg.suggest.max_edit_distance = *o.max_edit_distance;
    if (o.min_prefix_length) cfg.suggest.min_prefix_length = *o.min_prefix_length;
    if (o.host) cfg.host = *o.host;
    if (o.port) {
        if (*o.port < 0 || *o.port > 65535) throw ConfigError("--port must be within [0, 65535]");
        cfg.port = static_cast<std::uint16_t>(*o.port);
    }
    try {
        cfg.search.validate();
        cfg.suggest.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

const Path& require(const std::optional<Path>& p, const char* what) {
    if (!p) throw ConfigError(std::string("no ") + what + " given (flag or config file)");
    return *p;
}

class IndexUnreadable : public Error {
public:
    using Error::Error;
};

std::shared_ptr<const Index> open_index(const AppConfig& cfg, const AnalyzerConfig& analyzer, std::ostream& err) {
    const auto& path = require(cfg.index, "index path");
    std::shared_ptr<const Index> index;
    try {
        index = std::make_shared<const Index>(load_index(path));
    } catch (const Error& e) {
        throw IndexUnreadable(path.string() + ": " + e.what());
    }
    if (index->analyzer_fingerprint() != index_fingerprint(analyzer))
        err << "warning: index was built with a different index-time analyzer configuration\n";
    return index;
}

std::string score4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

int cmd_index(const AppConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto analyzer = build_analyzer(cfg);
    const auto& corpus_path = require(cfg.corpus, "corpus");
    const auto& out_path = require(cfg.index, "output index path");

    std::vector<CorpusDocument> docs;
    IndexBuilder builder(analyzer);
    try {
        docs = read_corpus(corpus_path);
        for (auto& d : docs) builder.add_document(std::move(d.id), std::move(d.text));
    } catch (const IngestError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIngest;
    } catch (const DuplicateDocId& e) {
        err << "error: " << e.what() << '\n';
        return kExitIngest;
    }
    const auto index = builder.commit();
    if (index.doc_count() == 0) err << "warning: corpus contains no documents\n";
    try {
        save_index(index, out_path);
    } catch (const IoFailure& e) {
        err << "error: " << e.what() << '\n';
        return kExitIndex;
    }
    out << "documents: " << index.doc_count() << '\n'
        << "avgdl: " << score4(index.avg_doc_length()) << '\n'
        << "vocabulary: " << index.terms().size() << '\n';
    return kExitOk;
}

int cmd_search(const AppConfig& cfg, const std::string& query, std::size_t page, std::size_t size,
               bool no_synonyms, std::ostream& out, std::ostream& err) {
    auto analyzer = build_analyzer(cfg);
    const auto index = open_index(cfg, analyzer, err);
    if (no_synonyms) analyzer = without_synonyms(analyzer);

    auto options = cfg.search;
    options.page = page;
    options.size = size;
    options.escape_markup = false;
    const auto results = search(*index, query, options, analyzer, cfg.suggest);

    out << "total: " << results.total << '\n';
    auto rank = (page - 1) * size;
    for (const auto& h : results.hits) {
        out << ++rank << ". " << h.doc << "  " << score4(h.score) << "  " << h.snippet << '\n';
    }
    if (results.did_you_mean) out << "did you mean: " << *results.did_you_mean << '\n';
    return kExitOk;
}

int cmd_suggest(const AppConfig& cfg, const std::string& prefix, std::size_t k, std::ostream& out,
                std::ostream& err) {
    const auto analyzer = build_analyzer(cfg);
    const auto index = open_index(cfg, analyzer, err);
    for (const auto& term : autosuggest(*index, prefix, k, cfg.suggest)) out << term << '\n';
    return kExitOk;
}

int cmd_eval(const AppConfig& cfg, bool compare, const std::string& format_name, unsigned threads,
             std::ostream& out, std::ostream& err) {
    ReportFormat format = ReportFormat::text;
    if (format_name == "csv") format = ReportFormat::csv;
    else if (format_name == "json") format = ReportFormat::json;

    const auto analyzer = build_analyzer(cfg);
    Qrels qrels;
    std::vector<QueryEntry> queries;
    try {
        queries = load_queries(read_text_file(require(cfg.queries, "queries file")));
        qrels = load_qrels(read_text_file(require(cfg.qrels, "qrels file")));
    } catch (const LineError& e) {
        throw ConfigError(e.what());
    } catch (const IoFailure& e) {
        throw ConfigError(e.what());
    }
    const auto index = open_index(cfg, analyzer, err);

    try {
        if (!compare) {
            const auto report = evaluate(*index, queries, qrels, analyzer, cfg.search, threads);
            write_report(out, report, analyzer.synonyms_active(AnalysisMode::query) ? "with synonyms" : "without synonyms",
                         format);
            return kExitOk;
        }
        const auto without = evaluate(*index, queries, qrels, without_synonyms(analyzer), cfg.search, threads);
        const auto with = evaluate(*index, queries, qrels, analyzer, cfg.search, threads);
        write_comparison(out, without, with, compare_runs(without, with), format);
    } catch (const MissingQrels& e) {
        err << "error: " << e.what() << '\n';
        return kExitMissingQrels;
    }
    return kExitOk;
}

int cmd_serve(const AppConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto analyzer = build_analyzer(cfg);
    const auto index = open_index(cfg, analyzer, err);
    SearchService service(index, analyzer, cfg.search, cfg.suggest);
    ServerConfig server_cfg;
    server_cfg.host = cfg.host;
    server_cfg.port = cfg.port;
    server_cfg.static_dir = cfg.static_dir;

    // Signals are taken synchronously by a dedicated thread; every other
    // thread (including the server's workers) inherits the blocked mask.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    sigset_t previous;
    pthread_sigmask(SIG_BLOCK, &signals, &previous);

    HttpServer server(service, server_cfg);
    if (!server.bind()) {
        pthread_sigmask(SIG_SETMASK, &previous, nullptr);
        err << "error: cannot bind " << cfg.host << ':' << cfg.port << '\n';
        return kExitPortBusy;
    }
    out << "serving " << index->doc_count() << " documents on http://" << cfg.host << ':' << server.port() << '\n'
        << std::flush;

    std::atomic<bool> stopping{false};
    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        stopping = true;
        server.stop();
    });
    server.listen();
    if (!stopping) pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    out << "shutdown\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Afaan Oromo full-text retrieval: index, search, suggest, evaluate, serve", "air"};
    app.require_subcommand(1);
    app.fallthrough();
    Overrides o;
    app.add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);

    const auto analyzer_flags = [&o](CLI::App* sub) {
        sub->add_option("--stopwords", o.stopwords, "stopword file");
        sub->add_option("--synonyms", o.synonyms, "synonym file");
        sub->add_option("--synonym-mode", o.synonym_mode, "query_only | index_and_query | off");
        sub->add_flag("--no-expand", o.no_expand, "collapse equivalence classes to their first member");
        sub->add_flag("--case-sensitive", o.case_sensitive, "match synonym rules case-sensitively");
    };
    const auto ranking_flags = [&o](CLI::App* sub) {
        sub->add_option("--k1", o.k1, "BM25 k1");
        sub->add_option("--b", o.b, "BM25 b");
    };

    auto* index_cmd = app.add_subcommand("index", "build an index from a corpus");
    index_cmd->add_option("--corpus", o.corpus, "directory of .txt files or records file");
    index_cmd->add_option("--out,--index", o.index, "index file to write");
    analyzer_flags(index_cmd);

    std::string query;
    std::size_t page = 1;
    std::size_t size = 10;
    bool no_synonyms = false;
    auto* search_cmd = app.add_subcommand("search", "run a query");
    search_cmd->add_option("query", query, "query text")->required();
    search_cmd->add_option("--index", o.index, "index file");
    search_cmd->add_option("--page", page, "1-based page")->check(CLI::PositiveNumber);
    search_cmd->add_option("--size", size, "page size")->check(CLI::PositiveNumber);
    search_cmd->add_flag("--no-synonyms", no_synonyms, "disable the synonym filter");
    search_cmd->add_option("--snippet-window", o.snippet_window, "snippet width in characters");
    search_cmd->add_option("--pre-tag", o.pre_tag, "highlight start marker");
    search_cmd->add_option("--post-tag", o.post_tag, "highlight end marker");
    search_cmd->add_option("--max-edit-distance", o.max_edit_distance, "did-you-mean distance bound");
    analyzer_flags(search_cmd);
    ranking_flags(search_cmd);

    std::string prefix;
    std::size_t k = 10;
    auto* suggest_cmd = app.add_subcommand("suggest", "prefix autosuggest");
    suggest_cmd->add_option("prefix", prefix, "prefix")->required();
    suggest_cmd->add_option("--index", o.index, "index file");
    suggest_cmd->add_option("-k", k, "maximum suggestions")->check(CLI::PositiveNumber);
    suggest_cmd->add_option("--min-prefix-length", o.min_prefix_length, "shortest prefix answered");

    bool compare = false;
    std::string format = "text";
    unsigned threads = 1;
    auto* eval_cmd = app.add_subcommand("eval", "precision / recall / F evaluation");
    eval_cmd->add_option("--index", o.index, "index file");
    eval_cmd->add_option("--queries", o.queries, "queries file");
    eval_cmd->add_option("--qrels", o.qrels, "relevance judgments");
    eval_cmd->add_flag("--compare-synonyms", compare, "run without and with synonyms and report deltas");
    eval_cmd->add_option("--format", format, "text | csv | json")->check(CLI::IsMember({"text", "csv", "json"}));
    eval_cmd->add_option("--threads", threads, "queries evaluated concurrently")->check(CLI::PositiveNumber);
    analyzer_flags(eval_cmd);
    ranking_flags(eval_cmd);

    auto* serve_cmd = app.add_subcommand("serve", "HTTP JSON API");
    serve_cmd->add_option("--index", o.index, "index file");
    serve_cmd->add_option("--host", o.host, "listen address");
    serve_cmd->add_option("--port", o.port, "listen port (0 = any free port)");
    serve_cmd->add_option("--static", o.static_dir, "directory served at /");
    analyzer_flags(serve_cmd);
    ranking_flags(serve_cmd);

    std::vector<char*> argv;
    std::vector<std::string> storage = args;
    if (storage.empty()) storage.emplace_back("air");
    for (auto& a : storage) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        const auto cfg = resolve(o);
        if (*index_cmd) return cmd_index(cfg, out, err);
        if (*search_cmd) return cmd_search(cfg, query, page, size, no_synonyms, out, err);
        if (*suggest_cmd) return cmd_suggest(cfg, prefix, k, out, err);
        if (*eval_cmd) return cmd_eval(cfg, compare, format, threads, out, err);
        if (*serve_cmd) return cmd_serve(cfg, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IndexUnreadable& e) {
        err << "error: cannot load index " << e.what() << '\n';
        return kExitIndex;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}

}  // namespace air
