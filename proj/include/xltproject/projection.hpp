#ifndef XLTPROJECT_PROJECTION_HPP
#define XLTPROJECT_PROJECTION_HPP

// Span-based label projection along word alignments.
//
// For every source span (in start order) the candidate target set is the set
// of target indices linked to any token of the span. Active per-span checks
// run on that raw set, COMP-SRC first, then COMP-TGT; a span without any
// candidate is UNALIGNED. A surviving span is written as B-X at the first
// candidate index and I-X through the last one (gaps filled). Under RSTR-TGT a
// single-token span writes B-X at the first candidate index only.
//
// Overlaps are resolved first-span-wins: every span with a candidate claims its
// mapping range unless some position in it is already claimed, in which case it
// is a CONFLICT. A span rejected by COMP-SRC/COMP-TGT still claims its range
// (and leaves it "O"), so adding a per-span filter can only remove projected
// spans, never unlock later ones. RSTR-TGT shrinks ranges and therefore can
// resolve conflicts that exist without it.
//
// TRAIN drops the instance when any span fails an active per-span filter or,
// when no per-span filter is active, when none of its spans could be written
// (other unmappable spans are then omitted and counted). COMP-INS runs last on
// the realized tag sequence. TEST never drops: unmapped spans leave "O".

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "xltproject/bio.hpp"
#include "xltproject/detail/parallel.hpp"
#include "xltproject/error.hpp"
#include "xltproject/projection_types.hpp"
#include "xltproject/types.hpp"

namespace xltproject {

inline std::optional<CandidateSpan> candidate_span(const LabeledSpan& span,
                                                   const Alignment& alignment,
                                                   std::size_t tgt_len) {
  const auto& links = alignment.links();
  auto it = std::lower_bound(links.begin(), links.end(), Link{span.start, 0});
  CandidateSpan cand;
  for (; it != links.end() && it->src <= span.end; ++it) {
    if (it->tgt >= tgt_len)
      throw ValidationError("link " + std::to_string(it->src) + "-" + std::to_string(it->tgt) +
                            " exceeds target length " + std::to_string(tgt_len));
    cand.indices.push_back(it->tgt);
  }
  if (cand.indices.empty()) return std::nullopt;
  std::sort(cand.indices.begin(), cand.indices.end());
  cand.indices.erase(std::unique(cand.indices.begin(), cand.indices.end()), cand.indices.end());
  return cand;
}

using TagAssignment = std::vector<std::pair<std::size_t, Tag>>;

inline TagAssignment span_map(const LabeledSpan& span, const CandidateSpan& cand) {
  TagAssignment out;
  out.reserve(cand.last() - cand.first() + 1);
  out.emplace_back(cand.first(), begin_tag(span.type));
  for (std::size_t j = cand.first() + 1; j <= cand.last(); ++j)
    out.emplace_back(j, inside_tag(span.type));
  return out;
}

/// Single-token source spans only; multi-token spans go through span_map.
inline TagAssignment apply_rstr_tgt(const LabeledSpan& span, const CandidateSpan& cand) {
  if (span.start != span.end)
    throw ValidationError("RSTR-TGT applies to single-token spans only, got " + span.type + "[" +
                          std::to_string(span.start) + "," + std::to_string(span.end) + "]");
  return {{cand.first(), begin_tag(span.type)}};
}

inline bool check_comp_src(const LabeledSpan& span, const Alignment& alignment) {
  const auto& links = alignment.links();
  for (std::size_t i = span.start; i <= span.end; ++i) {
    auto it = std::lower_bound(links.begin(), links.end(), Link{i, 0});
    if (it == links.end() || it->src != i) return false;
  }
  return true;
}

inline bool check_comp_tgt(const CandidateSpan& cand) {
  return cand.indices.size() == cand.last() - cand.first() + 1;
}

inline bool check_comp_ins(const std::vector<LabeledSpan>& src_spans,
                           const std::vector<LabeledSpan>& projected_spans) {
  std::map<std::string_view, long> balance;
  for (const auto& s : src_spans) ++balance[s.type];
  for (const auto& s : projected_spans) --balance[s.type];
  return std::all_of(balance.begin(), balance.end(), [](const auto& kv) { return kv.second == 0; });
}

/// Every target token takes the tag of the lowest-index source token linked to
/// it (else "O"), followed by BIO repair. Kept as the word-level baseline.
inline std::vector<Tag> naive_project_tags(const LabeledSentence& src, const Alignment& alignment,
                                           std::size_t tgt_len) {
  std::vector<Tag> tags(tgt_len, "O");
  std::vector<bool> set(tgt_len, false);
  for (const auto& link : alignment.links()) { // ascending src
    if (link.src >= src.size() || link.tgt >= tgt_len)
      throw ValidationError("link " + std::to_string(link.src) + "-" +
                            std::to_string(link.tgt) + " out of bounds");
    if (set[link.tgt]) continue;
    set[link.tgt] = true;
    tags[link.tgt] = src.tags[link.src];
  }
  return repair_bio(std::move(tags));
}

inline LabeledSentence naive_project(const LabeledSentence& src, const Sentence& tgt,
                                     const Alignment& alignment) {
  return {tgt, naive_project_tags(src, alignment, tgt.size())};
}

inline void check_alignment_bounds(const Alignment& alignment, std::size_t src_len,
                                   std::size_t tgt_len) {
  for (const auto& link : alignment.links())
    if (link.src >= src_len || link.tgt >= tgt_len)
      throw ValidationError("link " + std::to_string(link.src) + "-" + std::to_string(link.tgt) +
                            " out of bounds for " + std::to_string(src_len) + "x" +
                            std::to_string(tgt_len) + " sentence pair");
}

struct SpanMapping {
  std::vector<SpanReport> reports;
  std::vector<Tag> tags;
};

/// Direction-independent core: candidates, per-span checks, narrowing and
/// conflict resolution. COMP-INS is ignored here.
inline SpanMapping map_spans(const std::vector<LabeledSpan>& spans, const Alignment& alignment,
                             std::size_t tgt_len, const FilterSet& filters) {
  SpanMapping out;
  out.tags.assign(tgt_len, "O");
  std::vector<bool> claimed(tgt_len, false);
  out.reports.reserve(spans.size());
  for (const auto& span : spans) {
    SpanReport report{span, candidate_span(span, alignment, tgt_len), SpanStatus::Unaligned, {}};
    if (!report.candidate) {
      out.reports.push_back(std::move(report));
      continue;
    }
    const auto& cand = *report.candidate;
    const bool narrow = filters.rstr_tgt && span.length() == 1;
    const TargetRange range{cand.first(), narrow ? cand.first() : cand.last()};
    const bool blocked =
        std::any_of(claimed.begin() + range.first, claimed.begin() + range.last + 1,
                    [](bool c) { return c; });
    if (!blocked) std::fill(claimed.begin() + range.first, claimed.begin() + range.last + 1, true);

    if (filters.comp_src && !check_comp_src(span, alignment)) {
      report.status = SpanStatus::FilteredSrc;
    } else if (filters.comp_tgt && !check_comp_tgt(cand)) {
      report.status = SpanStatus::FilteredTgt;
    } else if (blocked) {
      report.status = SpanStatus::Conflict;
    } else {
      report.status = SpanStatus::Projected;
      report.written = range;
      for (auto& [j, tag] : narrow ? apply_rstr_tgt(span, cand) : span_map(span, cand))
        out.tags[j] = std::move(tag);
    }
    out.reports.push_back(std::move(report));
  }
  return out;
}

inline void check_filters(Direction direction, const FilterSet& filters) {
  if (filters.legal_for(direction)) return;
  throw ValidationError(std::string(direction == Direction::Train ? "rstr-tgt" : "comp-ins") +
                        " is not available for " + to_string(direction) + " projection");
}

inline ProjectionOutcome project_instance(const LabeledSentence& src, const Sentence& tgt,
                                          const Alignment& alignment, Direction direction,
                                          const FilterSet& filters) {
  check_filters(direction, filters);
  if (src.tags.size() != src.sentence.size())
    throw ValidationError("source tag count differs from token count");
  check_alignment_bounds(alignment, src.size(), tgt.size());

  const auto spans = extract_spans(src);
  auto mapping = map_spans(spans, alignment, tgt.size(), filters);

  ProjectionOutcome outcome;
  outcome.span_reports = std::move(mapping.reports);
  outcome.instance_kept = true;
  outcome.instance_status = InstanceStatus::Kept;

  if (direction == Direction::Train && !spans.empty()) {
    std::size_t written = 0;
    for (const auto& r : outcome.span_reports) written += r.status == SpanStatus::Projected;
    if (filters.per_span() && written != spans.size()) {
      outcome.instance_status = InstanceStatus::SpanRejected;
    } else if (written == 0) {
      outcome.instance_status = InstanceStatus::NothingProjected;
    } else {
      outcome.omitted_spans = spans.size() - written;
      if (filters.comp_ins && !check_comp_ins(spans, extract_spans(mapping.tags)))
        outcome.instance_status = InstanceStatus::FilteredIns;
    }
    outcome.instance_kept = outcome.instance_status == InstanceStatus::Kept;
    if (!outcome.instance_kept) outcome.omitted_spans = 0;
  }
  if (outcome.instance_kept) outcome.projected = LabeledSentence{tgt, std::move(mapping.tags)};
  return outcome;
}

struct CorpusDiagnostics {
  Direction direction = Direction::Train;
  FilterSet filters;
  std::size_t instances = 0;
  std::size_t kept = 0;
  std::size_t source_spans = 0;
  std::size_t projected_spans = 0; // in kept instances
  std::size_t omitted_spans = 0;
  std::map<std::string, std::size_t> span_status;     // keyed by to_string(SpanStatus)
  std::map<std::string, std::size_t> instance_status; // keyed by to_string(InstanceStatus)
  std::optional<std::size_t> baseline_projected_spans; // NO-FILT, TEST only
  std::optional<double> recovered_rate;                // kept / instances, TRAIN only
  std::optional<double> mapped_span_fraction;          // projected / NO-FILT projected, TEST only

  bool operator==(const CorpusDiagnostics&) const = default;
};

struct CorpusProjection {
  std::vector<ProjectionOutcome> outcomes;
  CorpusDiagnostics diagnostics;
};

namespace detail {

inline std::vector<ProjectionOutcome>
project_all(const std::vector<LabeledSentence>& sources, const std::vector<Sentence>& targets,
            const std::vector<Alignment>& alignments, Direction direction,
            const FilterSet& filters, std::size_t parallelism) {
  return ordered_map(sources.size(), parallelism, [&](std::size_t i) {
    try {
      return project_instance(sources[i], targets[i], alignments[i], direction, filters);
    } catch (const ValidationError& e) {
      throw ValidationError(e.message(), i);
    }
  });
}

} // namespace detail

inline CorpusProjection project_corpus(const std::vector<LabeledSentence>& sources,
                                       const std::vector<Sentence>& targets,
                                       const std::vector<Alignment>& alignments,
                                       Direction direction, const FilterSet& filters,
                                       std::size_t parallelism = 1) {
  if (sources.size() != targets.size() || sources.size() != alignments.size())
    throw ValidationError("corpus length mismatch: " + std::to_string(sources.size()) +
                          " sources, " + std::to_string(targets.size()) + " targets, " +
                          std::to_string(alignments.size()) + " alignments");
  check_filters(direction, filters);

  CorpusProjection result;
  result.outcomes = detail::project_all(sources, targets, alignments, direction, filters, parallelism);

  auto& d = result.diagnostics;
  d.direction = direction;
  d.filters = filters;
  d.instances = sources.size();
  for (const auto& o : result.outcomes) {
    d.kept += o.instance_kept;
    d.source_spans += o.span_reports.size();
    d.projected_spans += o.projected_span_count();
    d.omitted_spans += o.omitted_spans;
    ++d.instance_status[to_string(o.instance_status)];
    for (const auto& r : o.span_reports) ++d.span_status[to_string(r.status)];
  }
  if (direction == Direction::Train) {
    if (d.instances > 0) d.recovered_rate = static_cast<double>(d.kept) / d.instances;
  } else {
    if (filters.none()) {
      d.baseline_projected_spans = d.projected_spans;
    } else {
      std::size_t base = 0;
      for (const auto& o :
           detail::project_all(sources, targets, alignments, direction, {}, parallelism))
        base += o.projected_span_count();
      d.baseline_projected_spans = base;
    }
    if (*d.baseline_projected_spans > 0)
      d.mapped_span_fraction =
          static_cast<double>(d.projected_spans) / *d.baseline_projected_spans;
  }
  return result;
}

inline nlohmann::ordered_json to_json(const CorpusDiagnostics& d) {
  nlohmann::ordered_json j;
  j["direction"] = to_string(d.direction);
  j["filters"] = d.filters.name();
  j["instances"] = d.instances;
  j["kept"] = d.kept;
  j["source_spans"] = d.source_spans;
  j["projected_spans"] = d.projected_spans;
  j["omitted_spans"] = d.omitted_spans;
  j["span_status"] = d.span_status;
  j["instance_status"] = d.instance_status;
  auto opt = [](const auto& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(); };
  j["baseline_projected_spans"] = opt(d.baseline_projected_spans);
  j["recovered_rate"] = opt(d.recovered_rate);
  j["mapped_span_fraction"] = opt(d.mapped_span_fraction);
  return j;
}

} // namespace xltproject

#endif // XLTPROJECT_PROJECTION_HPP
