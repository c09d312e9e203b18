#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace finset {

enum class Task { cu, sa, ner, nu, ts, smp, cs, fd, hi };

std::string_view task_name(Task t);
Task task_from_name(std::string_view name);

enum class Metric {
    accuracy,
    entity_f1,
    exact_match,
    rouge1,
    rouge2,
    rougeL,
    hallucination_index,
};

std::string_view metric_name(Metric m);

struct MetricReport {
    Task task = Task::sa;
    Metric metric = Metric::accuracy;
    double value = 0.0;  // in [0,1]
    std::size_t n = 0;
};

struct EntitySpan {
    std::size_t start = 0;
    std::size_t end = 0;  // exclusive
    std::string label;

    auto operator<=>(const EntitySpan&) const = default;
};

struct AgreementReport {
    double kappa = 0.0;
    double observed_agreement = 0.0;
    double expected_agreement = 0.0;
    std::size_t n = 0;
    std::vector<std::string> categories;
};

// Fig. 7 response-quality categories: A correct and satisfying, B acceptable
// with minor flaws, C relevant but wrong, D irrelevant or invalid.
const std::vector<std::string>& quality_categories();

// Exact-match fraction after casefold/trim normalization.
double accuracy(const std::vector<std::string>& pred, const std::vector<std::string>& gold);

struct PrecisionRecallF1 {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Micro-averaged over exact (span, label) tuples across documents.
PrecisionRecallF1 entity_f1(const std::vector<std::set<EntitySpan>>& pred,
                            const std::vector<std::set<EntitySpan>>& gold);

// Predictions are run through tool-call extraction/evaluation, canonicalized
// ('$'/commas stripped, '%' divides by 100) and compared within rel_tol;
// non-numeric values fall back to normalized string comparison.
double exact_match_numeric(const std::vector<std::string>& pred,
                           const std::vector<std::string>& gold, double rel_tol = 1e-4);

struct RougeScores {
    double rouge1 = 0.0;
    double rouge2 = 0.0;
    double rougeL = 0.0;
};

RougeScores rouge(const std::vector<std::string>& candidates,
                  const std::vector<std::string>& references);

// HI: proportion of correctly answered definition MCQs.
double hallucination_index(const std::vector<int>& responses, const std::vector<int>& keys);

AgreementReport cohens_kappa(const std::vector<std::string>& labels_a,
                             const std::vector<std::string>& labels_b);

// ---------------------------------------------------------------------------
// File-level evaluation

struct PredictionRecord {
    std::string id;
    std::string value;                       // label / numeric / summary text
    std::optional<int> option_index;         // MCQ answers
    std::vector<EntitySpan> spans;           // NER answers
};

std::vector<PredictionRecord> read_predictions(const std::string& path, bool strict);

// annotation file: {id, annotator, label}
struct AnnotationRecord {
    std::string id;
    std::string annotator;
    std::string label;
};

std::vector<AnnotationRecord> read_annotations(const std::string& path, bool strict);

// Dispatches to the metric assigned to the task; `agreement_path`, when set,
// restricts scoring to ids on which every annotator agrees.
std::vector<MetricReport> evaluate_task(Task task, const std::string& pred_path,
                                        const std::string& gold_path,
                                        const std::optional<std::string>& agreement_path,
                                        bool strict);

}  // namespace finset
