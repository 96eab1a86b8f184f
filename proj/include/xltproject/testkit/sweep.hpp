#ifndef XLTPROJECT_TESTKIT_SWEEP_HPP
#define XLTPROJECT_TESTKIT_SWEEP_HPP

// Exhaustive oracle sweep and seeded pipeline fuzzing.

#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "xltproject/bio.hpp"
#include "xltproject/conll.hpp"
#include "xltproject/detail/parallel.hpp"
#include "xltproject/ensemble.hpp"
#include "xltproject/pharaoh.hpp"
#include "xltproject/projection.hpp"
#include "xltproject/testkit/generators.hpp"
#include "xltproject/testkit/oracle.hpp"

namespace xltproject::testkit {

/// One- and two-span labelings of a sentence of length n. Two-span layouts use
/// types (X, X) and (X, Y).
inline std::vector<std::vector<LabeledSpan>> span_layouts(std::size_t n) {
  std::vector<std::vector<LabeledSpan>> out;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) out.push_back({{"X", a, b}});
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        for (std::size_t d = c; d < n; ++d)
          for (const char* second : {"X", "Y"}) out.push_back({{"X", a, b}, {second, c, d}});
  return out;
}

struct SweepReport {
  std::size_t instances = 0;     // (alignment, layout, direction, filters) tuples
  std::size_t disagreements = 0; // projection module != oracle
  std::size_t bio_violations = 0;
  std::size_t monotonicity_violations = 0; // TEST: adding comp-src/comp-tgt added a span
  std::size_t rstr_length_violations = 0;  // TEST+rstr: single-token span written wider
  std::vector<std::string> examples;       // first few failures, human readable

  bool ok() const {
    return disagreements == 0 && bio_violations == 0 && monotonicity_violations == 0 &&
           rstr_length_violations == 0;
  }

  SweepReport& operator+=(const SweepReport& o) {
    instances += o.instances;
    disagreements += o.disagreements;
    bio_violations += o.bio_violations;
    monotonicity_violations += o.monotonicity_violations;
    rstr_length_violations += o.rstr_length_violations;
    for (const auto& e : o.examples)
      if (examples.size() < 10) examples.push_back(e);
    return *this;
  }
};

namespace detail {

inline std::string describe(const InstanceSpec& spec, Direction d, const FilterSet& f) {
  std::ostringstream os;
  os << to_string(d) << " filters=" << f.name() << " src_len=" << spec.src_len
     << " tgt_len=" << spec.tgt_len << " spans=";
  for (const auto& s : spec.spans) os << s.type << "[" << s.start << "," << s.end << "]";
  os << " links=\"" << format_alignment(spec.alignment()) << "\"";
  return os.str();
}

inline SweepReport sweep_alignment(std::size_t src_len, std::size_t tgt_len, std::uint64_t bits,
                                   const std::vector<std::vector<LabeledSpan>>& layouts,
                                   const std::vector<LabeledSentence>& sources,
                                   const Sentence& target) {
  SweepReport rep;
  InstanceSpec spec{src_len, tgt_len, {}, bits};
  const Alignment alignment = spec.alignment();
  for (std::size_t l = 0; l < layouts.size(); ++l) {
    spec.spans = layouts[l];
    for (Direction d : {Direction::Train, Direction::Test}) {
      const auto filter_sets = FilterSet::all_legal(d);
      std::vector<unsigned> projected_mask(filter_sets.size(), 0);
      for (std::size_t fi = 0; fi < filter_sets.size(); ++fi) {
        const auto& f = filter_sets[fi];
        const auto got = project_instance(sources[l], target, alignment, d, f);
        const auto want = oracle_project(spec, d, f);
        ++rep.instances;
        auto fail = [&](std::size_t& counter, const char* what) {
          ++counter;
          if (rep.examples.size() < 10) rep.examples.push_back(what + (": " + describe(spec, d, f)));
        };
        if (!(got == want)) fail(rep.disagreements, "oracle disagreement");
        if (got.projected && !is_bio_valid(got.projected->tags)) fail(rep.bio_violations, "BIO");
        for (std::size_t k = 0; k < got.span_reports.size(); ++k) {
          const auto& r = got.span_reports[k];
          if (r.status != SpanStatus::Projected) continue;
          projected_mask[fi] |= 1U << k;
          if (f.rstr_tgt && r.span.length() == 1 && r.written->first != r.written->last)
            fail(rep.rstr_length_violations, "RSTR-TGT length");
        }
      }
      if (d != Direction::Test) continue;
      // all_legal enumerates bit 1 = comp-src, bit 2 = comp-tgt
      for (std::size_t fi = 0; fi < filter_sets.size(); ++fi)
        for (std::size_t extra : {1U, 2U}) {
          if (fi & extra) continue;
          if ((projected_mask[fi | extra] & ~projected_mask[fi]) == 0) continue;
          ++rep.monotonicity_violations;
          if (rep.examples.size() < 10)
            rep.examples.push_back("monotonicity: " + describe(spec, d, filter_sets[fi | extra]));
        }
    }
  }
  return rep;
}

} // namespace detail

/// Compares the projection module with the oracle on every instance with
/// 1 <= src_len, tgt_len <= max_len, every alignment, every one/two-span
/// layout, both directions and all legal filter sets.
inline SweepReport exhaustive_sweep(std::size_t max_len = 4, std::size_t parallelism = 1) {
  SweepReport total;
  for (std::size_t src_len = 1; src_len <= max_len; ++src_len) {
    const auto layouts = span_layouts(src_len);
    std::vector<LabeledSentence> sources;
    for (const auto& layout : layouts) sources.push_back(InstanceSpec{src_len, 0, layout, 0}.source());
    for (std::size_t tgt_len = 1; tgt_len <= max_len; ++tgt_len) {
      const Sentence target = InstanceSpec{0, tgt_len, {}, 0}.target();
      const std::uint64_t count = std::uint64_t{1} << (src_len * tgt_len);
      const std::size_t chunks = std::min<std::uint64_t>(count, 256);
      const auto parts = xltproject::detail::ordered_map(chunks, parallelism, [&](std::size_t c) {
        SweepReport part;
        for (std::uint64_t bits = c; bits < count; bits += chunks)
          part += detail::sweep_alignment(src_len, tgt_len, bits, layouts, sources, target);
        return part;
      });
      for (const auto& p : parts) total += p;
    }
  }
  return total;
}

struct FuzzReport {
  std::size_t instances = 0;
  std::size_t runs = 0; // instance x configuration evaluations
  std::size_t bio_violations = 0;
  std::size_t crashes = 0;
  std::size_t rstr_length_violations = 0;
  std::vector<std::string> outputs; // serialized output per configuration
  std::vector<std::string> examples;

  bool ok() const { return bio_violations == 0 && crashes == 0 && rstr_length_violations == 0; }
};

/// Runs a seeded random corpus through TRAIN and TEST projection under every
/// legal filter set, and a seeded logit corpus through the ensemble under every
/// TEST filter set. `outputs` holds the serialized results for byte comparison
/// between runs.
inline FuzzReport fuzz_pipeline(std::uint64_t seed, std::size_t size, std::size_t parallelism = 1) {
  FuzzReport rep;
  rep.instances = size;
  GeneratorOptions opt;
  opt.max_len = 10;
  const auto corpus = gen_random_corpus(seed, size, opt);
  auto note = [&](const std::string& what) {
    if (rep.examples.size() < 10) rep.examples.push_back(what);
  };

  for (Direction d : {Direction::Train, Direction::Test}) {
    for (const auto& f : FilterSet::all_legal(d)) {
      const std::string config = std::string(to_string(d)) + "/" + f.name();
      try {
        const auto result =
            project_corpus(corpus.sources, corpus.targets, corpus.alignments, d, f, parallelism);
        std::vector<LabeledSentence> kept;
        for (std::size_t i = 0; i < result.outcomes.size(); ++i) {
          const auto& o = result.outcomes[i];
          ++rep.runs;
          if (!o.projected) continue;
          if (!is_bio_valid(o.projected->tags)) {
            ++rep.bio_violations;
            note("BIO violation " + config + " instance " + std::to_string(i));
          }
          for (const auto& r : o.span_reports)
            if (f.rstr_tgt && r.status == SpanStatus::Projected && r.span.length() == 1 &&
                r.written->first != r.written->last) {
              ++rep.rstr_length_violations;
              note("RSTR-TGT length " + config + " instance " + std::to_string(i));
            }
          kept.push_back(*o.projected);
        }
        rep.outputs.push_back(config + "\n" + write_conll(kept) +
                              to_json(result.diagnostics).dump() + "\n");
      } catch (const std::exception& e) {
        ++rep.crashes;
        note(config + ": " + e.what());
      }
    }
  }

  const LabelVocabulary vocab{{"O", "B-PER", "I-PER", "B-LOC", "I-LOC"}};
  const auto logits = gen_random_logit_corpus(seed ^ 0x9E3779B97F4A7C15ULL, size, vocab, opt);
  for (const auto& f : FilterSet::all_legal(Direction::Test)) {
    for (EnsembleSpace space : {EnsembleSpace::Logits, EnsembleSpace::Probs}) {
      const std::string config = std::string("ensemble/") + f.name() +
                                 (space == EnsembleSpace::Logits ? "/logits" : "/probs");
      try {
        const auto out =
            ensemble_corpus(logits.train, logits.test, logits.alignments, f, space, parallelism);
        for (std::size_t i = 0; i < out.size(); ++i) {
          ++rep.runs;
          if (!is_bio_valid(out[i].tags)) {
            ++rep.bio_violations;
            note("BIO violation " + config + " instance " + std::to_string(i));
          }
        }
        rep.outputs.push_back(config + "\n" + write_conll(out));
      } catch (const std::exception& e) {
        ++rep.crashes;
        note(config + ": " + e.what());
      }
    }
  }
  return rep;
}

} // namespace xltproject::testkit

#endif // XLTPROJECT_TESTKIT_SWEEP_HPP
