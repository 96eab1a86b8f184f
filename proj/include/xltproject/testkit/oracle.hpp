#ifndef XLTPROJECT_TESTKIT_ORACLE_HPP
#define XLTPROJECT_TESTKIT_ORACLE_HPP

// Brute-force reference for span projection on small instances. Written from
// the definitions only: it includes nothing but the data types and must not
// call into bio.hpp or projection.hpp.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xltproject/projection_types.hpp"
#include "xltproject/types.hpp"

namespace xltproject::testkit {

/// A small projection instance. Bit (i * tgt_len + j) of alignment_bits set
/// means source token i is linked to target token j.
struct InstanceSpec {
  std::size_t src_len = 0;
  std::size_t tgt_len = 0;
  std::vector<LabeledSpan> spans; // disjoint, sorted by start
  std::uint64_t alignment_bits = 0;

  bool linked(std::size_t i, std::size_t j) const {
    return (alignment_bits >> (i * tgt_len + j)) & 1U;
  }

  Alignment alignment() const {
    std::vector<Link> links;
    for (std::size_t i = 0; i < src_len; ++i)
      for (std::size_t j = 0; j < tgt_len; ++j)
        if (linked(i, j)) links.push_back({i, j});
    return Alignment(std::move(links));
  }

  LabeledSentence source() const {
    LabeledSentence s;
    for (std::size_t i = 0; i < src_len; ++i) {
      s.sentence.tokens.push_back("s" + std::to_string(i));
      s.tags.push_back("O");
    }
    for (const auto& span : spans)
      for (std::size_t i = span.start; i <= span.end; ++i)
        s.tags[i] = (i == span.start ? "B-" : "I-") + span.type;
    return s;
  }

  Sentence target() const {
    Sentence t;
    for (std::size_t j = 0; j < tgt_len; ++j) t.tokens.push_back("t" + std::to_string(j));
    return t;
  }
};

inline ProjectionOutcome oracle_project(const InstanceSpec& spec, Direction direction,
                                        const FilterSet& filters) {
  ProjectionOutcome outcome;
  std::vector<std::string> out(spec.tgt_len, "O");
  std::vector<int> owner(spec.tgt_len, -1); // span that claimed each target position

  for (std::size_t k = 0; k < spec.spans.size(); ++k) {
    const LabeledSpan& span = spec.spans[k];
    SpanReport report;
    report.span = span;

    std::set<std::size_t> cand;
    for (std::size_t i = 0; i < spec.src_len; ++i)
      for (std::size_t j = 0; j < spec.tgt_len; ++j)
        if (spec.linked(i, j) && i >= span.start && i <= span.end) cand.insert(j);
    if (cand.empty()) {
      report.status = SpanStatus::Unaligned;
      outcome.span_reports.push_back(report);
      continue;
    }
    report.candidate = CandidateSpan{std::vector<std::size_t>(cand.begin(), cand.end())};

    const std::size_t lo = *cand.begin();
    const std::size_t hi = *cand.rbegin();
    const bool single_token = span.start == span.end;
    const std::size_t stop = (filters.rstr_tgt && single_token) ? lo : hi;

    bool free = true;
    for (std::size_t j = lo; j <= stop; ++j)
      if (owner[j] != -1) free = false;
    if (free)
      for (std::size_t j = lo; j <= stop; ++j) owner[j] = static_cast<int>(k);

    bool every_source_linked = true;
    for (std::size_t i = span.start; i <= span.end; ++i) {
      bool any = false;
      for (std::size_t j = 0; j < spec.tgt_len; ++j) any = any || spec.linked(i, j);
      every_source_linked = every_source_linked && any;
    }
    std::set<std::size_t> full_range;
    for (std::size_t j = lo; j <= hi; ++j) full_range.insert(j);
    const bool contiguous = full_range == cand;

    if (filters.comp_src && !every_source_linked) {
      report.status = SpanStatus::FilteredSrc;
    } else if (filters.comp_tgt && !contiguous) {
      report.status = SpanStatus::FilteredTgt;
    } else if (!free) {
      report.status = SpanStatus::Conflict;
    } else {
      report.status = SpanStatus::Projected;
      report.written = TargetRange{lo, stop};
      out[lo] = "B-" + span.type;
      for (std::size_t j = lo + 1; j <= stop; ++j) out[j] = "I-" + span.type;
    }
    outcome.span_reports.push_back(report);
  }

  std::size_t ok = 0;
  for (const auto& r : outcome.span_reports)
    if (r.status == SpanStatus::Projected) ++ok;
  const std::size_t total = spec.spans.size();

  outcome.instance_status = InstanceStatus::Kept;
  if (direction == Direction::Train && total > 0) {
    if ((filters.comp_src || filters.comp_tgt) && ok < total) {
      outcome.instance_status = InstanceStatus::SpanRejected;
    } else if (ok == 0) {
      outcome.instance_status = InstanceStatus::NothingProjected;
    } else if (filters.comp_ins) {
      std::map<std::string, int> want, got;
      for (const auto& span : spec.spans) want[span.type] += 1;
      for (const auto& tag : out)
        if (tag.size() > 2 && tag[0] == 'B') got[tag.substr(2)] += 1;
      if (want != got) outcome.instance_status = InstanceStatus::FilteredIns;
    }
  }
  outcome.instance_kept = outcome.instance_status == InstanceStatus::Kept;
  if (outcome.instance_kept) {
    if (direction == Direction::Train) outcome.omitted_spans = total - ok;
    outcome.projected = LabeledSentence{spec.target(), out};
  }
  return outcome;
}

} // namespace xltproject::testkit

#endif // XLTPROJECT_TESTKIT_ORACLE_HPP
