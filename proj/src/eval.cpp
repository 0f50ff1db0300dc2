#include "air/eval.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "air/error.hpp"
#include "air/unicode.hpp"

namespace air {

double precision(std::size_t relevant_retrieved, std::size_t retrieved) {
    if (relevant_retrieved > retrieved) throw ContractViolation("relevant_retrieved exceeds retrieved");
    if (retrieved == 0) return 0.0;
    return static_cast<double>(relevant_retrieved) / static_cast<double>(retrieved);
}

double recall(std::size_t relevant_retrieved, std::size_t total_relevant) {
    if (total_relevant == 0) throw ContractViolation("total_relevant must be >= 1");
    if (relevant_retrieved > total_relevant) throw ContractViolation("relevant_retrieved exceeds total_relevant");
    return static_cast<double>(relevant_retrieved) / static_cast<double>(total_relevant);
}

double f_measure(double p, double r) {
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

double miss_probability(double avg_recall) { return 1.0 - avg_recall; }

namespace {

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out.push_back(line);
        pos = nl + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

bool skippable(std::string_view line) {
    const auto first = line.find_first_not_of(" \t");
    return first == std::string_view::npos || line[first] == '#';
}

}  // namespace

Qrels load_qrels(std::string_view text) {
    Qrels qrels;
    std::size_t line_no = 0;
    for (auto line : lines_of(text)) {
        ++line_no;
        if (skippable(line)) continue;
        std::istringstream fields{std::string(line)};
        std::string qid, iteration, doc, rel_text, extra;
        if (!(fields >> qid >> iteration >> doc >> rel_text) || (fields >> extra))
            throw MalformedLine("expected \"qid 0 docid rel\"", line_no);
        long long rel = 0;
        const auto* first = rel_text.data();
        const auto* last = first + rel_text.size();
        if (auto [ptr, ec] = std::from_chars(first, last, rel); ec != std::errc{} || ptr != last)
            throw MalformedLine("relevance must be an integer", line_no);
        if (rel > 0) qrels[qid].insert(doc);
    }
    return qrels;
}

std::vector<QueryEntry> load_queries(std::string_view text) {
    std::vector<QueryEntry> queries;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    for (auto line : lines_of(text)) {
        ++line_no;
        if (skippable(line)) continue;
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) throw MalformedLine("expected \"qid<TAB>query text\"", line_no);
        std::string id(trim(line.substr(0, tab)));
        std::string query(trim(line.substr(tab + 1)));
        if (id.empty() || query.empty())
            throw MalformedLine("empty query id or text", line_no);
        if (!seen.insert(id).second) throw DuplicateQueryId("duplicate query id " + id, line_no);
        queries.push_back({std::move(id), std::move(query)});
    }
    return queries;
}

EvalRow make_row(std::string query_id, std::string query, std::size_t total_relevant, std::size_t total_retrieved,
                 std::size_t relevant_retrieved) {
    EvalRow row{std::move(query_id), std::move(query), total_relevant, total_retrieved, relevant_retrieved};
    row.precision = precision(relevant_retrieved, total_retrieved);
    row.recall = recall(relevant_retrieved, total_relevant);
    row.f_measure = f_measure(row.precision, row.recall);
    return row;
}

EvalReport make_report(std::vector<EvalRow> rows) {
    EvalReport report;
    report.rows = std::move(rows);
    if (!report.rows.empty()) {
        double p = 0.0;
        double r = 0.0;
        for (const auto& row : report.rows) {
            p += row.precision;
            r += row.recall;
        }
        const auto n = static_cast<double>(report.rows.size());
        report.avg_precision = p / n;
        report.avg_recall = r / n;
    }
    report.f_of_averages = f_measure(report.avg_precision, report.avg_recall);
    report.miss_probability = miss_probability(report.avg_recall);
    return report;
}

EvalReport evaluate(const Index& index, const std::vector<QueryEntry>& queries, const Qrels& qrels,
                    const AnalyzerConfig& analyzer, const SearchOptions& options, unsigned threads) {
    for (const auto& q : queries) {
        if (!qrels.contains(q.id)) throw MissingQrels(q.id);
    }

    std::vector<EvalRow> rows(queries.size());
    const auto run_one = [&](std::size_t i) {
        const auto& q = queries[i];
        const auto& relevant = qrels.at(q.id);
        const auto ranked = retrieve(index, q.text, options, analyzer);
        std::size_t hits = 0;
        for (const auto& r : ranked) hits += relevant.contains(index.document(r.doc).id) ? 1 : 0;
        rows[i] = make_row(q.id, q.text, relevant.size(), ranked.size(), hits);
    };

    if (threads <= 1 || queries.size() < 2) {
        for (std::size_t i = 0; i < queries.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> workers;
        std::vector<std::exception_ptr> errors(threads);
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (auto i = next++; i < queries.size(); i = next++) run_one(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        workers.clear();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return make_report(std::move(rows));
}

DeltaReport compare_runs(const EvalReport& without, const EvalReport& with) {
    if (without.rows.size() != with.rows.size()) throw QuerySetMismatch("reports cover different query counts");
    DeltaReport delta;
    for (std::size_t i = 0; i < with.rows.size(); ++i) {
        const auto& a = without.rows[i];
        const auto& b = with.rows[i];
        if (a.query_id != b.query_id) throw QuerySetMismatch("query " + a.query_id + " vs " + b.query_id);
        delta.rows.push_back({b.query_id, b.query, b.precision - a.precision, b.recall - a.recall,
                              b.f_measure - a.f_measure});
    }
    delta.avg_precision = with.avg_precision - without.avg_precision;
    delta.avg_recall = with.avg_recall - without.avg_recall;
    delta.f_of_averages = with.f_of_averages - without.f_of_averages;
    delta.miss_probability = with.miss_probability - without.miss_probability;
    return delta;
}

namespace {

double rounded_hundredths(double percent) {
    // The epsilon absorbs binary representation error: 0.68745 * 100 * 100
    // must still round up.
    return std::floor(std::fabs(percent) * 100.0 + 0.5 + 1e-7) / 100.0;
}

}  // namespace

std::string format_percent(double fraction) {
    const double pct = fraction * 100.0;
    const double r = rounded_hundredths(pct);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.2f", (pct < 0 && r != 0.0) ? "-" : "", r);
    return buf;
}

std::string format_signed_percent(double fraction) {
    const double pct = fraction * 100.0;
    const double r = rounded_hundredths(pct);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.2f", r == 0.0 ? "" : (pct < 0 ? "-" : "+"), r);
    return buf;
}

// --- writers ----------------------------------------------------------------

namespace {

enum class Align { left, right };

struct Table {
    std::vector<std::string> header;
    std::vector<Align> align;
    std::vector<std::vector<std::string>> rows;

    void write(std::ostream& out) const {
        std::vector<std::size_t> width(header.size());
        const auto measure = [&](const std::vector<std::string>& row) {
            for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], unicode::length(row[c]));
        };
        measure(header);
        for (const auto& r : rows) measure(r);

        const auto emit = [&](const std::vector<std::string>& row) {
            std::string line;
            for (std::size_t c = 0; c < row.size(); ++c) {
                const auto pad = std::string(width[c] - unicode::length(row[c]), ' ');
                if (c > 0) line += "  ";
                line += align[c] == Align::right ? pad + row[c] : row[c] + pad;
            }
            while (!line.empty() && line.back() == ' ') line.pop_back();
            out << line << '\n';
        };
        emit(header);
        for (const auto& r : rows) emit(r);
    }
};

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

nlohmann::ordered_json report_json(const EvalReport& report) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"query_id", r.query_id},
                        {"query", r.query},
                        {"total_relevant", r.total_relevant},
                        {"total_retrieved", r.total_retrieved},
                        {"relevant_retrieved", r.relevant_retrieved},
                        {"precision", r.precision},
                        {"recall", r.recall},
                        {"f_measure", r.f_measure}});
    }
    return {{"rows", rows},
            {"avg_precision", report.avg_precision},
            {"avg_recall", report.avg_recall},
            {"f_of_averages", report.f_of_averages},
            {"miss_probability", report.miss_probability}};
}

nlohmann::ordered_json delta_json(const DeltaReport& delta) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : delta.rows) {
        rows.push_back({{"query_id", r.query_id},
                        {"query", r.query},
                        {"precision", r.precision},
                        {"recall", r.recall},
                        {"f_measure", r.f_measure}});
    }
    return {{"rows", rows},
            {"avg_precision", delta.avg_precision},
            {"avg_recall", delta.avg_recall},
            {"f_of_averages", delta.f_of_averages},
            {"miss_probability", delta.miss_probability}};
}

}  // namespace

void write_report(std::ostream& out, const EvalReport& report, std::string_view title, ReportFormat format) {
    switch (format) {
        case ReportFormat::text: {
            out << "== " << title << " ==\n";
            Table t{{"Query", "Queries", "Total-Relevant", "Total-Retrieved", "Relevant-Retrieved", "Precision %",
                     "Recall %", "F %"},
                    {Align::left, Align::left, Align::right, Align::right, Align::right, Align::right, Align::right,
                     Align::right},
                    {}};
            for (const auto& r : report.rows) {
                t.rows.push_back({r.query_id, r.query, std::to_string(r.total_relevant),
                                  std::to_string(r.total_retrieved), std::to_string(r.relevant_retrieved),
                                  format_percent(r.precision), format_percent(r.recall), format_percent(r.f_measure)});
            }
            t.rows.push_back({"Average", "", "", "", "", format_percent(report.avg_precision),
                              format_percent(report.avg_recall), format_percent(report.f_of_averages)});
            t.write(out);
            out << "Miss probability (1 - recall) %: " << format_percent(report.miss_probability) << '\n';
            break;
        }
        case ReportFormat::csv: {
            out << "run,query_id,query,total_relevant,total_retrieved,relevant_retrieved,precision,recall,f_measure\n";
            const auto run = csv_field(title);
            for (const auto& r : report.rows) {
                out << run << ',' << csv_field(r.query_id) << ',' << csv_field(r.query) << ',' << r.total_relevant
                    << ',' << r.total_retrieved << ',' << r.relevant_retrieved << ',' << fixed6(r.precision) << ','
                    << fixed6(r.recall) << ',' << fixed6(r.f_measure) << '\n';
            }
            out << run << ",average,,,,," << fixed6(report.avg_precision) << ',' << fixed6(report.avg_recall) << ','
                << fixed6(report.f_of_averages) << '\n';
            out << run << ",miss_probability,,,,,,," << fixed6(report.miss_probability) << '\n';
            break;
        }
        case ReportFormat::json: {
            auto j = report_json(report);
            j["run"] = std::string(title);
            out << j.dump(2) << '\n';
            break;
        }
    }
}

void write_delta(std::ostream& out, const DeltaReport& delta, ReportFormat format) {
    switch (format) {
        case ReportFormat::text: {
            out << "== delta (with - without), percentage points ==\n";
            Table t{{"Query", "Queries", "dPrecision", "dRecall", "dF"},
                    {Align::left, Align::left, Align::right, Align::right, Align::right},
                    {}};
            for (const auto& r : delta.rows) {
                t.rows.push_back({r.query_id, r.query, format_signed_percent(r.precision),
                                  format_signed_percent(r.recall), format_signed_percent(r.f_measure)});
            }
            t.rows.push_back({"Average", "", format_signed_percent(delta.avg_precision),
                              format_signed_percent(delta.avg_recall), format_signed_percent(delta.f_of_averages)});
            t.write(out);
            out << "Miss probability delta: " << format_signed_percent(delta.miss_probability) << '\n';
            break;
        }
        case ReportFormat::csv: {
            out << "query_id,query,d_precision,d_recall,d_f_measure\n";
            for (const auto& r : delta.rows) {
                out << csv_field(r.query_id) << ',' << csv_field(r.query) << ',' << fixed6(r.precision) << ','
                    << fixed6(r.recall) << ',' << fixed6(r.f_measure) << '\n';
            }
            out << "average,," << fixed6(delta.avg_precision) << ',' << fixed6(delta.avg_recall) << ','
                << fixed6(delta.f_of_averages) << '\n';
            out << "miss_probability,,,," << fixed6(delta.miss_probability) << '\n';
            break;
        }
        case ReportFormat::json: out << delta_json(delta).dump(2) << '\n'; break;
    }
}

void write_comparison(std::ostream& out, const EvalReport& without, const EvalReport& with,
                      const DeltaReport& delta, ReportFormat format) {
    if (format == ReportFormat::json) {
        nlohmann::ordered_json j;
        j["without_synonyms"] = report_json(without);
        j["with_synonyms"] = report_json(with);
        j["delta"] = delta_json(delta);
        out << j.dump(2) << '\n';
        return;
    }
    write_report(out, without, "without synonyms", format);
    out << '\n';
    write_report(out, with, "with synonyms", format);
    out << '\n';
    write_delta(out, delta, format);
}

}  // namespace air
