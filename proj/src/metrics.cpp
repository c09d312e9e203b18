#include "finset/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>

#include <json.hpp>

#include "finset/errors.hpp"
#include "finset/tokenize.hpp"
#include "finset/toolcall.hpp"

namespace finset {

namespace {

constexpr std::array<std::string_view, 9> kTaskNames = {"cu", "sa", "ner", "nu", "ts",
                                                        "smp", "cs", "fd", "hi"};
constexpr std::array<std::string_view, 7> kMetricNames = {
    "accuracy", "entity_f1", "exact_match", "rouge1", "rouge2", "rougeL",
    "hallucination_index"};

std::string normalize_label(std::string_view s) {
    std::size_t begin = 0, end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return to_lower(s.substr(begin, end - begin));
}

void require_aligned(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        throw DataError(std::string(what) + ": length mismatch (" + std::to_string(a) +
                        " vs " + std::to_string(b) + ")");
    if (a == 0) throw DataError(std::string(what) + ": empty input");
}

double f1_of(double p, double r) { return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

std::optional<toolcall::Decimal> to_numeric(const std::string& raw) {
    if (auto program = toolcall::extract_program(raw)) {
        try {
            return toolcall::eval_program(*program);
        } catch (const toolcall::DivideByZeroError&) {
            return std::nullopt;
        }
    }
    try {
        return toolcall::decimal_from_string(normalize_label(raw));
    } catch (const toolcall::ToolcallError&) {
        return std::nullopt;
    }
}

}  // namespace

std::string_view task_name(Task t) { return kTaskNames[static_cast<int>(t)]; }

Task task_from_name(std::string_view name) {
    std::string lower = to_lower(name);
    for (std::size_t i = 0; i < kTaskNames.size(); ++i)
        if (kTaskNames[i] == lower) return static_cast<Task>(i);
    throw ConfigError("unknown task: " + std::string(name));
}

std::string_view metric_name(Metric m) { return kMetricNames[static_cast<int>(m)]; }

const std::vector<std::string>& quality_categories() {
    static const std::vector<std::string> categories = {"A", "B", "C", "D"};
    return categories;
}

double accuracy(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
    require_aligned(pred.size(), gold.size(), "accuracy");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        if (normalize_label(pred[i]) == normalize_label(gold[i])) ++correct;
    return static_cast<double>(correct) / static_cast<double>(pred.size());
}

PrecisionRecallF1 entity_f1(const std::vector<std::set<EntitySpan>>& pred,
                            const std::vector<std::set<EntitySpan>>& gold) {
    require_aligned(pred.size(), gold.size(), "entity_f1");
    std::size_t tp = 0, n_pred = 0, n_gold = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        n_pred += pred[i].size();
        n_gold += gold[i].size();
        for (const EntitySpan& span : pred[i])
            if (gold[i].contains(span)) ++tp;
    }
    PrecisionRecallF1 out;
    if (n_pred == 0 && n_gold == 0) {
        out.precision = out.recall = out.f1 = 1.0;  // vacuous perfection
        return out;
    }
    out.precision = n_pred ? static_cast<double>(tp) / static_cast<double>(n_pred) : 0.0;
    out.recall = n_gold ? static_cast<double>(tp) / static_cast<double>(n_gold) : 0.0;
    out.f1 = f1_of(out.precision, out.recall);
    return out;
}

double exact_match_numeric(const std::vector<std::string>& pred,
                           const std::vector<std::string>& gold, double rel_tol) {
    require_aligned(pred.size(), gold.size(), "exact_match");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const auto p = to_numeric(pred[i]);
        const auto g = to_numeric(gold[i]);
        if (p && g) {
            const double pv = static_cast<double>(*p);
            const double gv = static_cast<double>(*g);
            const double scale = std::max(std::abs(pv), std::abs(gv));
            if (pv == gv || std::abs(pv - gv) <= rel_tol * scale) ++correct;
        } else if (!p && !g) {
            if (normalize_label(pred[i]) == normalize_label(gold[i])) ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(pred.size());
}

namespace {

std::vector<std::string> rouge_tokens(const std::string& text) {
    std::vector<std::string> tokens = tokenize(text);
    for (std::string& t : tokens) t = to_lower(t);
    return tokens;
}

double ngram_f1(const std::vector<std::string>& cand, const std::vector<std::string>& ref,
                std::size_t n) {
    if (cand.size() < n || ref.size() < n) return 0.0;
    std::map<std::vector<std::string>, std::size_t> ref_counts;
    for (std::size_t i = 0; i + n <= ref.size(); ++i)
        ++ref_counts[{ref.begin() + i, ref.begin() + i + n}];
    std::size_t overlap = 0;
    for (std::size_t i = 0; i + n <= cand.size(); ++i) {
        auto it = ref_counts.find({cand.begin() + i, cand.begin() + i + n});
        if (it != ref_counts.end() && it->second > 0) {
            --it->second;  // clipped counts
            ++overlap;
        }
    }
    const double p = static_cast<double>(overlap) / static_cast<double>(cand.size() - n + 1);
    const double r = static_cast<double>(overlap) / static_cast<double>(ref.size() - n + 1);
    return f1_of(p, r);
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace

RougeScores rouge(const std::vector<std::string>& candidates,
                  const std::vector<std::string>& references) {
    require_aligned(candidates.size(), references.size(), "rouge");
    RougeScores total;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const std::vector<std::string> cand = rouge_tokens(candidates[i]);
        const std::vector<std::string> ref = rouge_tokens(references[i]);
        if (ref.empty() || cand.empty()) continue;  // per-pair score 0
        total.rouge1 += ngram_f1(cand, ref, 1);
        total.rouge2 += ngram_f1(cand, ref, 2);
        const std::size_t lcs = lcs_length(cand, ref);
        const double p = static_cast<double>(lcs) / static_cast<double>(cand.size());
        const double r = static_cast<double>(lcs) / static_cast<double>(ref.size());
        total.rougeL += f1_of(p, r);
    }
    const double n = static_cast<double>(candidates.size());
    total.rouge1 /= n;
    total.rouge2 /= n;
    total.rougeL /= n;
    return total;
}

double hallucination_index(const std::vector<int>& responses, const std::vector<int>& keys) {
    require_aligned(responses.size(), keys.size(), "hallucination_index");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < responses.size(); ++i)
        if (responses[i] == keys[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(responses.size());
}

AgreementReport cohens_kappa(const std::vector<std::string>& labels_a,
                             const std::vector<std::string>& labels_b) {
    require_aligned(labels_a.size(), labels_b.size(), "cohens_kappa");
    const double n = static_cast<double>(labels_a.size());
    std::map<std::string, std::size_t> marg_a, marg_b;
    std::size_t agree = 0;
    for (std::size_t i = 0; i < labels_a.size(); ++i) {
        ++marg_a[labels_a[i]];
        ++marg_b[labels_b[i]];
        if (labels_a[i] == labels_b[i]) ++agree;
    }
    AgreementReport report;
    report.n = labels_a.size();
    report.observed_agreement = static_cast<double>(agree) / n;
    for (const auto& [label, count_a] : marg_a) {
        auto it = marg_b.find(label);
        if (it == marg_b.end()) continue;
        report.expected_agreement +=
            (static_cast<double>(count_a) / n) * (static_cast<double>(it->second) / n);
        report.categories.push_back(label);
    }
    for (const auto& [label, _] : marg_b)
        if (!marg_a.contains(label)) report.categories.push_back(label);
    std::sort(report.categories.begin(), report.categories.end());
    if (report.expected_agreement >= 1.0) {
        report.kappa = report.observed_agreement >= 1.0 ? 1.0 : 0.0;
    } else {
        report.kappa = (report.observed_agreement - report.expected_agreement) /
                       (1.0 - report.expected_agreement);
    }
    return report;
}

// ---------------------------------------------------------------------------
// File-level evaluation

std::vector<PredictionRecord> read_predictions(const std::string& path, bool strict) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read predictions: " + path);
    std::vector<PredictionRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object() || !j.contains("id") ||
            !j.contains("value")) {
            if (strict)
                throw DataError(path + ": record " + std::to_string(line_no) +
                                ": expected {id, value}");
            continue;
        }
        PredictionRecord rec;
        rec.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
        const nlohmann::json& value = j.at("value");
        if (value.is_array()) {
            for (const auto& s : value) {
                EntitySpan span;
                span.start = s.at("start").get<std::size_t>();
                span.end = s.at("end").get<std::size_t>();
                span.label = s.at("label").get<std::string>();
                if (span.start >= span.end)
                    throw DataError(path + ": record " + std::to_string(line_no) +
                                    ": span start must precede end");
                rec.spans.push_back(std::move(span));
            }
            rec.value = value.dump();
        } else if (value.is_number_integer()) {
            rec.option_index = value.get<int>();
            rec.value = std::to_string(*rec.option_index);
        } else if (value.is_string()) {
            rec.value = value.get<std::string>();
        } else {
            rec.value = value.dump();
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<AnnotationRecord> read_annotations(const std::string& path, bool strict) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read annotations: " + path);
    std::vector<AnnotationRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object() || !j.contains("id") ||
            !j.contains("annotator") || !j.contains("label")) {
            if (strict)
                throw DataError(path + ": record " + std::to_string(line_no) +
                                ": expected {id, annotator, label}");
            continue;
        }
        out.push_back({j.at("id").get<std::string>(), j.at("annotator").get<std::string>(),
                       j.at("label").get<std::string>()});
    }
    return out;
}

namespace {

// gold-order join of prediction records on id
std::vector<std::pair<PredictionRecord, PredictionRecord>> join_on_id(
    const std::vector<PredictionRecord>& pred, const std::vector<PredictionRecord>& gold) {
    std::unordered_map<std::string, const PredictionRecord*> by_id;
    for (const PredictionRecord& p : pred) {
        if (!by_id.emplace(p.id, &p).second)
            throw DataError("duplicate prediction id: " + p.id);
    }
    std::vector<std::pair<PredictionRecord, PredictionRecord>> joined;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        auto it = by_id.find(gold[i].id);
        if (it == by_id.end())
            throw DataError("gold record " + std::to_string(i + 1) + " (id '" +
                            gold[i].id + "') has no matching prediction");
        joined.emplace_back(*it->second, gold[i]);
    }
    return joined;
}

}  // namespace

std::vector<MetricReport> evaluate_task(Task task, const std::string& pred_path,
                                        const std::string& gold_path,
                                        const std::optional<std::string>& agreement_path,
                                        bool strict) {
    std::vector<PredictionRecord> pred = read_predictions(pred_path, strict);
    std::vector<PredictionRecord> gold = read_predictions(gold_path, strict);

    if (agreement_path) {
        std::map<std::string, std::set<std::string>> labels_by_id;
        for (const AnnotationRecord& a : read_annotations(*agreement_path, strict))
            labels_by_id[a.id].insert(a.label);
        auto agreed = [&](const PredictionRecord& r) {
            auto it = labels_by_id.find(r.id);
            return it != labels_by_id.end() && it->second.size() == 1;
        };
        std::erase_if(pred, [&](const PredictionRecord& r) { return !agreed(r); });
        std::erase_if(gold, [&](const PredictionRecord& r) { return !agreed(r); });
    }

    auto joined = join_on_id(pred, gold);
    const std::size_t n = joined.size();

    auto values = [&](bool from_pred) {
        std::vector<std::string> v;
        v.reserve(n);
        for (const auto& [p, g] : joined) v.push_back(from_pred ? p.value : g.value);
        return v;
    };

    std::vector<MetricReport> reports;
    switch (task) {
        case Task::cu:
        case Task::sa:
        case Task::smp:
        case Task::cs:
        case Task::fd:
            reports.push_back({task, Metric::accuracy, accuracy(values(true), values(false)), n});
            break;
        case Task::nu:
            reports.push_back(
                {task, Metric::exact_match, exact_match_numeric(values(true), values(false)), n});
            break;
        case Task::ner: {
            std::vector<std::set<EntitySpan>> p, g;
            for (const auto& [pr, gr] : joined) {
                p.emplace_back(pr.spans.begin(), pr.spans.end());
                g.emplace_back(gr.spans.begin(), gr.spans.end());
            }
            reports.push_back({task, Metric::entity_f1, entity_f1(p, g).f1, n});
            break;
        }
        case Task::ts: {
            const RougeScores scores = rouge(values(true), values(false));
            reports.push_back({task, Metric::rouge1, scores.rouge1, n});
            reports.push_back({task, Metric::rouge2, scores.rouge2, n});
            reports.push_back({task, Metric::rougeL, scores.rougeL, n});
            break;
        }
        case Task::hi: {
            std::vector<int> responses, keys;
            for (const auto& [pr, gr] : joined) {
                if (!pr.option_index || !gr.option_index)
                    throw DataError("task hi requires integer option indices (id '" +
                                    gr.id + "')");
                responses.push_back(*pr.option_index);
                keys.push_back(*gr.option_index);
            }
            reports.push_back({task, Metric::hallucination_index,
                               hallucination_index(responses, keys), n});
            break;
        }
    }
    return reports;
}

}  // namespace finset
