#ifndef XLTPROJECT_EVALUATE_HPP
#define XLTPROJECT_EVALUATE_HPP

// Exact-match span precision/recall/F1, seqeval default-mode semantics:
// tags are repaired and decoded into (type, start, end) spans, and a predicted
// span is a true positive only if the identical span exists in the gold
// sentence. 0/0 ratios are 0.

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "xltproject/bio.hpp"
#include "xltproject/error.hpp"
#include "xltproject/types.hpp"

namespace xltproject {

struct SpanCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  double precision() const { return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp); }
  double recall() const { return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn); }
  // 2PR/(P+R) reduces to 2tp/(2tp+fp+fn); computed that way to round once.
  double f1() const {
    return tp == 0 ? 0.0 : static_cast<double>(2 * tp) / (2 * tp + fp + fn);
  }
  std::size_t support() const { return tp + fn; }

  SpanCounts& operator+=(const SpanCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const SpanCounts&) const = default;
};

struct EvalReport {
  std::map<std::string, SpanCounts> per_type;
  SpanCounts micro;
  std::size_t sentences = 0;
  std::size_t tokens = 0;

  bool operator==(const EvalReport&) const = default;
};

inline EvalReport span_f1(const std::vector<LabeledSentence>& gold,
                          const std::vector<LabeledSentence>& pred) {
  if (gold.size() != pred.size())
    throw ValidationError("sentence count mismatch: gold " + std::to_string(gold.size()) +
                              ", pred " + std::to_string(pred.size()),
                          std::min(gold.size(), pred.size()));
  EvalReport report;
  report.sentences = gold.size();
  for (std::size_t k = 0; k < gold.size(); ++k) {
    if (gold[k].tags.size() != pred[k].tags.size())
      throw ValidationError("token count mismatch: gold " + std::to_string(gold[k].tags.size()) +
                                ", pred " + std::to_string(pred[k].tags.size()),
                            k);
    report.tokens += gold[k].tags.size();
    const auto g = extract_spans(repair_bio(gold[k].tags));
    const auto p = extract_spans(repair_bio(pred[k].tags));
    std::multiset<LabeledSpan> unmatched(g.begin(), g.end());
    for (const auto& span : p) {
      auto& counts = report.per_type[span.type];
      if (auto it = unmatched.find(span); it != unmatched.end()) {
        ++counts.tp;
        unmatched.erase(it);
      } else {
        ++counts.fp;
      }
    }
    for (const auto& span : unmatched) ++report.per_type[span.type].fn;
  }
  for (const auto& [type, counts] : report.per_type) report.micro += counts;
  return report;
}

enum class ReportFormat { Text, Json };

namespace detail {

inline void append_row(std::string& out, const std::string& name, const SpanCounts& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-16s %9.4f %9.4f %9.4f %7zu %7zu %7zu %7zu\n", name.c_str(),
                c.precision(), c.recall(), c.f1(), c.support(), c.tp, c.fp, c.fn);
  out += buf;
}

inline nlohmann::json counts_json(const SpanCounts& c) {
  return {{"tp", c.tp},           {"fp", c.fp},     {"fn", c.fn},
          {"precision", c.precision()}, {"recall", c.recall()}, {"f1", c.f1()}};
}

} // namespace detail

inline nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json j; // std::map-backed: keys serialize sorted
  j["per_type"] = nlohmann::json::object();
  for (const auto& [type, counts] : r.per_type) j["per_type"][type] = detail::counts_json(counts);
  j["micro"] = detail::counts_json(r.micro);
  j["sentences"] = r.sentences;
  j["tokens"] = r.tokens;
  return j;
}

inline std::string render_report(const EvalReport& r, ReportFormat format) {
  if (format == ReportFormat::Json) return to_json(r).dump(2) + "\n";
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-16s %9s %9s %9s %7s %7s %7s %7s\n", "type", "precision",
                "recall", "f1", "support", "tp", "fp", "fn");
  out += buf;
  for (const auto& [type, counts] : r.per_type) detail::append_row(out, type, counts);
  detail::append_row(out, "micro", r.micro);
  std::snprintf(buf, sizeof buf, "sentences %zu, tokens %zu\n", r.sentences, r.tokens);
  out += buf;
  return out;
}

} // namespace xltproject

#endif // XLTPROJECT_EVALUATE_HPP
