#include "finset/report.hpp"

#include <iomanip>
#include <map>
#include <sstream>

#include "finset/errors.hpp"

namespace finset {

namespace {

struct Table {
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }

    // first column left-aligned, the rest right-aligned
    std::string format() const {
        std::vector<std::size_t> widths;
        for (const auto& row : rows) {
            if (widths.size() < row.size()) widths.resize(row.size(), 0);
            for (std::size_t i = 0; i < row.size(); ++i)
                widths[i] = std::max(widths[i], row[i].size());
        }
        std::ostringstream out;
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i == 0) {
                    out << std::left << std::setw(static_cast<int>(widths[0])) << row[0];
                } else {
                    out << "  " << std::right << std::setw(static_cast<int>(widths[i]))
                        << row[i];
                }
            }
            out << '\n';
        }
        return out.str();
    }
};

std::string fmt_value(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4) << v;
    return out.str();
}

}  // namespace

SourceLedger build_source_ledger(const std::vector<Document>& input,
                                 const std::vector<Document>& output) {
    std::map<Source, SourceLedgerRow> by_source;
    for (const Document& d : input) {
        SourceLedgerRow& row = by_source[d.source];
        row.dataset = std::string(source_name(d.source));
        ++row.documents;
        row.tokens += d.tokens;
    }
    for (const Document& d : output) {
        auto it = by_source.find(d.source);
        if (it == by_source.end())
            throw DataError("output contains source absent from input: " +
                            std::string(source_name(d.source)));
        it->second.dedup_tokens += d.tokens;
    }
    SourceLedger ledger;
    SourceLedgerRow total;
    total.dataset = "Total";
    for (const auto& [_, row] : by_source) {
        total.documents += row.documents;
        total.tokens += row.tokens;
        total.dedup_tokens += row.dedup_tokens;
        ledger.rows.push_back(row);
    }
    ledger.rows.push_back(total);
    return ledger;
}

std::string format_source_ledger(const SourceLedger& ledger) {
    Table t;
    t.add({"Dataset", "Documents", "Tokens", "Deduplicated Tokens"});
    for (const SourceLedgerRow& row : ledger.rows)
        t.add({row.dataset, std::to_string(row.documents), std::to_string(row.tokens),
               std::to_string(row.dedup_tokens)});
    return t.format();
}

nlohmann::ordered_json source_ledger_to_json(const SourceLedger& ledger) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const SourceLedgerRow& row : ledger.rows) {
        nlohmann::ordered_json j;
        j["dataset"] = row.dataset;
        j["documents"] = row.documents;
        j["tokens"] = row.tokens;
        j["deduplicated_tokens"] = row.dedup_tokens;
        rows.push_back(std::move(j));
    }
    return rows;
}

std::string format_manifest_table(const Manifest& manifest) {
    Table t;
    t.add({"Stage", "Docs In", "Docs Out", "Tokens In", "Tokens Out", "Removed"});
    std::uint64_t removed_total = 0;
    for (const StageReport& r : manifest.stages) {
        const std::uint64_t removed = r.docs_in - r.docs_out;
        removed_total += removed;
        t.add({std::string(stage_name(r.stage)), std::to_string(r.docs_in),
               std::to_string(r.docs_out), std::to_string(r.tokens_in),
               std::to_string(r.tokens_out), std::to_string(removed)});
    }
    if (!manifest.stages.empty()) {
        const StageReport& first = manifest.stages.front();
        const StageReport& last = manifest.stages.back();
        t.add({"Total", std::to_string(first.docs_in), std::to_string(last.docs_out),
               std::to_string(first.tokens_in), std::to_string(last.tokens_out),
               std::to_string(removed_total)});
    }
    return t.format();
}

std::string format_metric_table(const std::vector<MetricReport>& reports) {
    Table t;
    for (const MetricReport& r : reports) {
        std::string label(metric_name(r.metric));
        if (r.metric == Metric::hallucination_index) label = "HI";
        t.add({label, fmt_value(r.value), "n=" + std::to_string(r.n)});
    }
    return t.format();
}

nlohmann::ordered_json metric_reports_to_json(const std::vector<MetricReport>& reports) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const MetricReport& r : reports) {
        nlohmann::ordered_json j;
        j["task"] = std::string(task_name(r.task));
        j["metric"] = std::string(metric_name(r.metric));
        j["value"] = r.value;
        j["n"] = r.n;
        arr.push_back(std::move(j));
    }
    return arr;
}

std::vector<MetricReport> metric_reports_from_json(const nlohmann::ordered_json& j) {
    std::vector<MetricReport> reports;
    for (const auto& item : j) {
        MetricReport r;
        r.task = task_from_name(item.at("task").get<std::string>());
        const std::string metric = item.at("metric").get<std::string>();
        bool found = false;
        for (int m = 0; m < 7; ++m) {
            if (metric_name(static_cast<Metric>(m)) == metric) {
                r.metric = static_cast<Metric>(m);
                found = true;
            }
        }
        if (!found) throw DataError("unknown metric: " + metric);
        r.value = item.at("value").get<double>();
        r.n = item.at("n").get<std::size_t>();
        reports.push_back(r);
    }
    return reports;
}

std::string format_agreement_report(const AgreementReport& report) {
    Table t;
    t.add({"kappa", fmt_value(report.kappa), "n=" + std::to_string(report.n)});
    t.add({"p_o", fmt_value(report.observed_agreement), ""});
    t.add({"p_e", fmt_value(report.expected_agreement), ""});
    return t.format();
}

nlohmann::ordered_json agreement_report_to_json(const AgreementReport& report) {
    nlohmann::ordered_json j;
    j["kappa"] = report.kappa;
    j["observed_agreement"] = report.observed_agreement;
    j["expected_agreement"] = report.expected_agreement;
    j["n"] = report.n;
    j["categories"] = report.categories;
    return j;
}

}  // namespace finset
