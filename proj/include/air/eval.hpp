#pragma once

#include <cstddef>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "air/analysis.hpp"
#include "air/index.hpp"
#include "air/search.hpp"

namespace air {

/// query id -> relevant doc ids.
using Qrels = std::map<std::string, std::set<std::string>>;

struct QueryEntry {
    std::string id;
    std::string text;

    friend bool operator==(const QueryEntry&, const QueryEntry&) = default;
};

struct EvalRow {
    std::string query_id;
    std::string query;
    std::size_t total_relevant = 0;
    std::size_t total_retrieved = 0;
    std::size_t relevant_retrieved = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;

    friend bool operator==(const EvalRow&, const EvalRow&) = default;
};

struct EvalReport {
    std::vector<EvalRow> rows;
    double avg_precision = 0.0;
    double avg_recall = 0.0;
    double f_of_averages = 0.0;  // harmonic mean of the two averages, not mean of row F
    double miss_probability = 0.0;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct DeltaRow {
    std::string query_id;
    std::string query;
    double precision = 0.0;  // with - without
    double recall = 0.0;
    double f_measure = 0.0;
};

struct DeltaReport {
    std::vector<DeltaRow> rows;
    double avg_precision = 0.0;
    double avg_recall = 0.0;
    double f_of_averages = 0.0;
    double miss_probability = 0.0;
};

/// 0 when nothing was retrieved. Throws ContractViolation if relevant_retrieved > retrieved.
double precision(std::size_t relevant_retrieved, std::size_t retrieved);
/// Throws ContractViolation unless relevant_retrieved <= total_relevant and total_relevant >= 1.
double recall(std::size_t relevant_retrieved, std::size_t total_relevant);
double f_measure(double p, double r);
double miss_probability(double avg_recall);

/// "qid 0 docid rel" per line; rel = 0 lines are ignored.
Qrels load_qrels(std::string_view text);
/// "qid<TAB>query text" per line.
std::vector<QueryEntry> load_queries(std::string_view text);

EvalRow make_row(std::string query_id, std::string query, std::size_t total_relevant, std::size_t total_retrieved,
                 std::size_t relevant_retrieved);
/// Macro averages over `rows`.
EvalReport make_report(std::vector<EvalRow> rows);

/// Runs every query unpaginated (retrieved = every doc with score > 0).
/// Throws MissingQrels for a query without judgments. `threads` > 1
/// evaluates queries concurrently; the report is identical either way.
EvalReport evaluate(const Index& index, const std::vector<QueryEntry>& queries, const Qrels& qrels,
                    const AnalyzerConfig& analyzer, const SearchOptions& options, unsigned threads = 1);

/// with - without, per query and on the averages. Throws QuerySetMismatch.
DeltaReport compare_runs(const EvalReport& without, const EvalReport& with);

/// Two decimals, round half away from zero, no percent sign: 0.68751 -> "68.75".
std::string format_percent(double fraction);
/// As format_percent with an explicit sign: "+3.70", "-1.52", "0.00".
std::string format_signed_percent(double fraction);

enum class ReportFormat { text, csv, json };

void write_report(std::ostream& out, const EvalReport& report, std::string_view title, ReportFormat format);
void write_delta(std::ostream& out, const DeltaReport& delta, ReportFormat format);
/// Both runs plus the delta; JSON output is a single object.
void write_comparison(std::ostream& out, const EvalReport& without, const EvalReport& with,
                      const DeltaReport& delta, ReportFormat format);

}  // namespace air
