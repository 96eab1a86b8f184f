#ifndef XLTPROJECT_PROJECTION_TYPES_HPP
#define XLTPROJECT_PROJECTION_TYPES_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xltproject/error.hpp"
#include "xltproject/types.hpp"

namespace xltproject {

/// TRAIN projects gold source labels onto a translation (instances may be
/// discarded); TEST projects predictions from a translated test sentence back
/// onto the original one (never discarded).
enum class Direction { Train, Test };

struct FilterSet {
  bool comp_src = false; // every source span token has a link
  bool comp_tgt = false; // candidate target indices are consecutive
  bool comp_ins = false; // span type multiset survives projection (TRAIN only)
  bool rstr_tgt = false; // single-token source spans map to one token (TEST only)

  bool none() const noexcept { return !comp_src && !comp_tgt && !comp_ins && !rstr_tgt; }
  bool per_span() const noexcept { return comp_src || comp_tgt; }
  bool operator==(const FilterSet&) const = default;

  bool legal_for(Direction d) const noexcept {
    return d == Direction::Train ? !rstr_tgt : !comp_ins;
  }

  /// Canonical kebab-case name: "none" or a comma list in the order
  /// comp-src,comp-tgt,comp-ins,rstr-tgt.
  std::string name() const {
    if (none()) return "none";
    std::string out;
    auto add = [&](bool on, const char* n) {
      if (!on) return;
      if (!out.empty()) out += ',';
      out += n;
    };
    add(comp_src, "comp-src");
    add(comp_tgt, "comp-tgt");
    add(comp_ins, "comp-ins");
    add(rstr_tgt, "rstr-tgt");
    return out;
  }

  /// Parses a comma list of comp-src, comp-tgt, comp-ins, rstr-tgt or "none".
  static FilterSet parse(std::string_view text) {
    FilterSet f;
    if (text == "none" || text.empty()) return f;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto comma = text.find(',', pos);
      auto item = text.substr(pos, comma == std::string_view::npos ? comma : comma - pos);
      if (item == "comp-src")
        f.comp_src = true;
      else if (item == "comp-tgt")
        f.comp_tgt = true;
      else if (item == "comp-ins")
        f.comp_ins = true;
      else if (item == "rstr-tgt")
        f.rstr_tgt = true;
      else
        throw ValidationError("unknown filter '" + std::string(item) +
                              "' (expected comp-src, comp-tgt, comp-ins, rstr-tgt or none)");
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return f;
  }

  /// Every filter set accepted for `d`, in a fixed order starting with NO-FILT.
  static std::vector<FilterSet> all_legal(Direction d) {
    std::vector<FilterSet> out;
    for (int bits = 0; bits < 8; ++bits) {
      FilterSet f;
      f.comp_src = bits & 1;
      f.comp_tgt = bits & 2;
      (d == Direction::Train ? f.comp_ins : f.rstr_tgt) = bits & 4;
      out.push_back(f);
    }
    return out;
  }
};

inline const char* to_string(Direction d) { return d == Direction::Train ? "train" : "test"; }

enum class SpanStatus { Projected, FilteredSrc, FilteredTgt, Unaligned, Conflict };

inline const char* to_string(SpanStatus s) {
  switch (s) {
  case SpanStatus::Projected: return "projected";
  case SpanStatus::FilteredSrc: return "filtered_src";
  case SpanStatus::FilteredTgt: return "filtered_tgt";
  case SpanStatus::Unaligned: return "unaligned";
  case SpanStatus::Conflict: return "conflict";
  }
  return "?";
}

/// Why a TRAIN instance was kept or dropped. TEST instances are always Kept.
enum class InstanceStatus {
  Kept,
  SpanRejected,     // a span failed an active per-span filter
  FilteredIns,      // COMP-INS mismatch on the realized output
  NothingProjected, // no per-span filter active and none of the spans could be mapped
};

inline const char* to_string(InstanceStatus s) {
  switch (s) {
  case InstanceStatus::Kept: return "kept";
  case InstanceStatus::SpanRejected: return "span_rejected";
  case InstanceStatus::FilteredIns: return "filtered_ins";
  case InstanceStatus::NothingProjected: return "nothing_projected";
  }
  return "?";
}

struct TargetRange {
  std::size_t first = 0;
  std::size_t last = 0;
  bool operator==(const TargetRange&) const = default;
};

struct SpanReport {
  LabeledSpan span;
  std::optional<CandidateSpan> candidate;
  SpanStatus status = SpanStatus::Unaligned;
  std::optional<TargetRange> written; // target positions labeled, when projected

  bool operator==(const SpanReport&) const = default;
};

struct ProjectionOutcome {
  std::optional<LabeledSentence> projected;
  std::vector<SpanReport> span_reports;
  bool instance_kept = false;
  InstanceStatus instance_status = InstanceStatus::Kept;
  std::size_t omitted_spans = 0; // TRAIN without per-span filters: spans dropped silently

  bool operator==(const ProjectionOutcome&) const = default;

  std::size_t projected_span_count() const {
    std::size_t n = 0;
    for (const auto& r : span_reports) n += r.status == SpanStatus::Projected;
    return instance_kept ? n : 0;
  }
};

} // namespace xltproject

#endif // XLTPROJECT_PROJECTION_TYPES_HPP
