#pragma once

#include <string>
#include <vector>

#include "finset/document.hpp"
#include "finset/metrics.hpp"

namespace finset {

// Per-source token ledger with a totals row (Dataset / Documents / Tokens /
// Deduplicated Tokens columns).
struct SourceLedgerRow {
    std::string dataset;
    std::uint64_t documents = 0;
    std::uint64_t tokens = 0;
    std::uint64_t dedup_tokens = 0;
};

struct SourceLedger {
    std::vector<SourceLedgerRow> rows;  // one per source present, plus total
};

SourceLedger build_source_ledger(const std::vector<Document>& input,
                                 const std::vector<Document>& output);

std::string format_source_ledger(const SourceLedger& ledger);
nlohmann::ordered_json source_ledger_to_json(const SourceLedger& ledger);

// Manifest as an aligned stage table plus a totals row.
std::string format_manifest_table(const Manifest& manifest);

std::string format_metric_table(const std::vector<MetricReport>& reports);
nlohmann::ordered_json metric_reports_to_json(const std::vector<MetricReport>& reports);
std::vector<MetricReport> metric_reports_from_json(const nlohmann::ordered_json& j);

std::string format_agreement_report(const AgreementReport& report);
nlohmann::ordered_json agreement_report_to_json(const AgreementReport& report);

}  // namespace finset
