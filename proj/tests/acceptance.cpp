// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes. Run with no arguments.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "test_support.hpp"
#include "xltproject/testkit/generators.hpp"
#include "xltproject/testkit/sweep.hpp"

using namespace xltproject;
using namespace xlt_test;

namespace {

constexpr std::uint64_t kFuzzSeed = 20240611;

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Check {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (notes.size() < 8) notes.push_back(what);
  }
};

// Criterion 4 needs the sweep's monotonicity count; run it once.
const testkit::SweepReport& sweep() {
  static const testkit::SweepReport rep = testkit::exhaustive_sweep(4, workers());
  return rep;
}

const testkit::FuzzReport& fuzz() {
  static const testkit::FuzzReport rep = testkit::fuzz_pipeline(kFuzzSeed, 10000, workers());
  return rep;
}

std::string path_of(const fs::path& p) { return p.string(); }

void oracle_equivalence(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  const auto& rep = sweep();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(rep.instances > 0, "sweep enumerated nothing");
  c.expect(rep.disagreements == 0, std::to_string(rep.disagreements) + " oracle disagreements");
  c.expect(rep.bio_violations == 0, std::to_string(rep.bio_violations) + " BIO violations");
  c.expect(secs < 300.0, "sweep took " + std::to_string(secs) + " s");
  for (const auto& e : rep.examples) c.expect(false, e);
  c.notes.insert(c.notes.begin(), std::to_string(rep.instances) + " instances in " +
                                      std::to_string(static_cast<int>(secs)) + " s");
}

void goethe_golden(Check& c) {
  const auto f = fixture("goethe");
  TempDir dir;
  struct Case {
    const char* sub;
    const char* tgt;
    const char* filters;
    const char* expected;
  };
  const Case cases[] = {
      {"project-train", "case1", "comp-src,comp-tgt,comp-ins", "case1.train.expected.conll"},
      {"project-train", "case2", "comp-src", "case2.train.comp-src.expected.conll"},
      {"project-test", "case2", "comp-src", "case3.test.comp-src.expected.conll"},
      {"project-test", "case2", "comp-src,rstr-tgt", "case3.test.comp-src.expected.conll"},
      {"project-test", "case1", "rstr-tgt", "case1.test.rstr-tgt.expected.conll"},
  };
  for (const auto& k : cases) {
    const auto out = dir / (std::string(k.filters) + "." + k.expected);
    const auto r = run_cli({k.sub, "--src-conll", path_of(f / "source.conll"), "--tgt-tokens",
                            path_of(f / (std::string(k.tgt) + ".tgt")), "--align",
                            path_of(f / (std::string(k.tgt) + ".align")), "--filters", k.filters,
                            "--output", path_of(out)});
    c.expect(r.code == 0, std::string(k.expected) + ": exit " + std::to_string(r.code) + " " + r.err);
    c.expect(slurp(out) == slurp(f / k.expected), std::string(k.expected) + ": bytes differ");
  }
  c.expect(slurp(f / "case2.train.comp-src.expected.conll").empty(), "case 2 golden not empty");
}

void bio_fuzz(Check& c) {
  const auto& first = fuzz();
  const auto rerun = testkit::fuzz_pipeline(kFuzzSeed, 10000, 1);
  c.expect(first.instances == 10000, "wrong corpus size");
  c.expect(first.bio_violations == 0, std::to_string(first.bio_violations) + " BIO violations");
  c.expect(first.crashes == 0, std::to_string(first.crashes) + " crashes");
  c.expect(first.outputs == rerun.outputs, "rerun (parallelism 1 vs N) not byte-identical");
  for (const auto& e : first.examples) c.expect(false, e);
  c.notes.insert(c.notes.begin(), std::to_string(first.runs) + " runs over " +
                                      std::to_string(first.outputs.size()) + " configurations");
}

void filter_semantics(Check& c) {
  // COMP-TGT <=> contiguity, through the full projection path: a span of k
  // source tokens whose links hit exactly the chosen target subset.
  std::size_t subsets = 0;
  for (std::size_t n = 1; n <= 6; ++n)
    for (unsigned mask = 1; mask < (1U << n); ++mask) {
      std::vector<std::size_t> picked;
      for (std::size_t j = 0; j < n; ++j)
        if (mask & (1U << j)) picked.push_back(j);
      const bool contiguous = picked.back() - picked.front() + 1 == picked.size();
      LabeledSentence src;
      std::vector<Link> links;
      for (std::size_t i = 0; i < picked.size(); ++i) {
        src.sentence.tokens.push_back("s" + std::to_string(i));
        src.tags.push_back(i == 0 ? "B-X" : "I-X");
        links.push_back({i, picked[i]});
      }
      Sentence tgt;
      for (std::size_t j = 0; j < n; ++j) tgt.tokens.push_back("t" + std::to_string(j));
      for (auto d : {Direction::Train, Direction::Test}) {
        const auto o = project_instance(src, tgt, Alignment(links), d, FilterSet{false, true, false, false});
        const bool rejected = o.span_reports.at(0).status == SpanStatus::FilteredTgt;
        c.expect(rejected == !contiguous, "COMP-TGT mismatch for mask " + std::to_string(mask));
        c.expect(check_comp_tgt(CandidateSpan{picked}) == contiguous, "check_comp_tgt mismatch");
      }
      ++subsets;
    }

  // RSTR-TGT over the fuzz corpus, counting that narrowing really happened
  const auto corpus = [] {
    testkit::GeneratorOptions opt;
    opt.max_len = 10;
    return testkit::gen_random_corpus(kFuzzSeed, 10000, opt);
  }();
  std::size_t singles = 0, narrowed = 0;
  for (const auto& f : FilterSet::all_legal(Direction::Test)) {
    if (!f.rstr_tgt) continue;
    const auto res = project_corpus(corpus.sources, corpus.targets, corpus.alignments,
                                    Direction::Test, f, workers());
    for (const auto& o : res.outcomes)
      for (const auto& r : o.span_reports) {
        if (r.status != SpanStatus::Projected || r.span.length() != 1) continue;
        ++singles;
        c.expect(r.written->first == r.written->last, "single-token span written wider");
        narrowed += r.candidate->indices.size() > 1;
      }
  }
  c.expect(fuzz().rstr_length_violations == 0, "fuzz pipeline reported RSTR-TGT violations");
  c.expect(singles > 0 && narrowed > 0, "fuzz corpus never exercised narrowing");

  c.expect(sweep().monotonicity_violations == 0,
           std::to_string(sweep().monotonicity_violations) + " TEST monotonicity violations");
  c.notes.insert(c.notes.begin(), std::to_string(subsets) + " target subsets, " +
                                      std::to_string(singles) + " single-token spans (" +
                                      std::to_string(narrowed) + " narrowed)");
}

void ensemble_contracts(Check& c) {
  const LabelVocabulary vocab{{"O", "B-PER", "I-PER", "B-LOC", "I-LOC"}};
  const auto corpus = testkit::gen_random_logit_corpus(kFuzzSeed + 1, 1000, vocab);

  // fallback: with no projected vector a sentence decodes from the train stream alone
  const std::vector<Alignment> none(1000);
  std::size_t fallbacks = 0;
  for (auto space : {EnsembleSpace::Logits, EnsembleSpace::Probs}) {
    const auto out = ensemble_corpus(corpus.train, corpus.test, none, FilterSet{}, space, workers());
    for (std::size_t i = 0; i < out.size(); ++i)
      c.expect(out[i].tags == argmax_tags(corpus.train.sentences[i], vocab),
               "fallback differs at " + std::to_string(i));
    const auto aligned =
        ensemble_corpus(corpus.train, corpus.test, corpus.alignments, FilterSet{}, space, workers());
    for (std::size_t i = 0; i < aligned.size(); ++i) {
      const auto& test = corpus.test.sentences[i];
      const LabeledSentence pred{test.sentence, argmax_tags(test, vocab)};
      const auto map =
          project_logits(test, pred, corpus.alignments[i], corpus.train.sentences[i].size(), FilterSet{});
      if (!map.empty()) continue;
      ++fallbacks;
      c.expect(aligned[i].tags == argmax_tags(corpus.train.sentences[i], vocab),
               "aligned fallback differs at " + std::to_string(i));
    }
  }
  c.expect(fallbacks > 0, "no naturally unprojected sentence in the corpus");

  // stream swap: the combined vector is identical with the streams exchanged
  std::size_t swaps = 0;
  for (std::size_t i = 0; i < corpus.train.sentences.size(); ++i) {
    const auto& test = corpus.test.sentences[i];
    const LabeledSentence pred{test.sentence, argmax_tags(test, vocab)};
    const auto map =
        project_logits(test, pred, corpus.alignments[i], corpus.train.sentences[i].size(), FilterSet{});
    for (const auto& [t, v] : map)
      for (auto space : {EnsembleSpace::Logits, EnsembleSpace::Probs}) {
        const auto& own = corpus.train.sentences[i].logits[t];
        c.expect(average(own, v, space) == average(v, own, space), "average not symmetric");
        ++swaps;
      }
  }
  c.expect(swaps > 0, "no projected vectors");

  // tie on the symmetric fixture
  const LabelVocabulary two{{"O", "B-PER"}};
  LogitSentence train{{{"t0"}}, {{1.0, 0.0}}};
  LogitSentence test{{{"s0"}}, {{0.0, 1.0}}};
  for (auto space : {EnsembleSpace::Logits, EnsembleSpace::Probs}) {
    const auto avg = average(train.logits[0], test.logits[0], space);
    c.expect(avg[0] == avg[1], "symmetric fixture did not tie");
    const auto out = ensemble({two, two, train, test, Alignment({{0, 0}})}, FilterSet{}, space);
    c.expect(out.tags == std::vector<Tag>{"O"}, "tie not resolved to index 0");
  }
  c.notes.insert(c.notes.begin(), std::to_string(fallbacks) + " natural fallbacks, " +
                                      std::to_string(swaps) + " swapped vectors");
}

void identity_pipeline(Check& c) {
  const auto corpus = testkit::gen_random_corpus(kFuzzSeed + 2, 1000);
  const auto id = testkit::make_identity_fixture(corpus.sources);
  TempDir dir;
  spit(dir / "gold.conll", write_conll(id.sources));
  for (auto d : {Direction::Train, Direction::Test})
    for (const auto& f : FilterSet::all_legal(d)) {
      const auto res = project_corpus(id.sources, id.targets, id.alignments, d, f, workers());
      std::vector<LabeledSentence> out;
      for (std::size_t i = 0; i < res.outcomes.size(); ++i) {
        const auto& o = res.outcomes[i];
        c.expect(o.instance_kept, "identity instance dropped under " + f.name());
        if (!o.projected) continue;
        c.expect(o.projected->tags == id.sources[i].tags, "labels changed under " + f.name());
        out.push_back(*o.projected);
      }
      spit(dir / "pred.conll", write_conll(out));
      const auto r = run_cli({"evaluate", "--gold", path_of(dir / "gold.conll"), "--pred",
                              path_of(dir / "pred.conll"), "--format", "json"});
      c.expect(r.code == 0, "evaluate exit " + std::to_string(r.code) + " " + r.err);
      if (r.code != 0) continue;
      const auto j = nlohmann::json::parse(r.out);
      c.expect(j["micro"]["f1"].get<double>() == 1.0,
               std::string(to_string(d)) + "/" + f.name() + ": micro-F1 " + j["micro"]["f1"].dump());
    }
}

void metric_fixture(Check& c) {
  auto sent = [](std::vector<Tag> tags) {
    LabeledSentence s;
    for (std::size_t i = 0; i < tags.size(); ++i) s.sentence.tokens.push_back("w" + std::to_string(i));
    s.tags = std::move(tags);
    return s;
  };
  struct Case {
    const char* name;
    std::vector<LabeledSentence> gold, pred;
    std::size_t tp, fp, fn;
    double p, r, f1; // hand-computed rationals
  };
  const std::vector<Case> cases{
      {"perfect", {sent({"B-PER", "I-PER", "O", "B-LOC"})}, {sent({"B-PER", "I-PER", "O", "B-LOC"})},
       2, 0, 0, 1.0, 1.0, 1.0},
      {"half", {sent({"B-PER", "O", "B-LOC"})}, {sent({"B-PER", "O", "B-ORG"})}, 1, 1, 1, 1.0 / 2,
       1.0 / 2, 1.0 / 2},
      {"off-by-one", {sent({"B-PER", "I-PER", "O"})}, {sent({"B-PER", "O", "O"})}, 0, 1, 1, 0.0, 0.0,
       0.0},
      {"one-of-three", {sent({"B-PER", "O", "B-LOC", "O", "B-ORG"})}, {sent({"B-PER", "O", "O", "O", "O"})},
       1, 0, 2, 1.0, 1.0 / 3, 1.0 / 2},
      {"repair+spurious", {sent({"I-LOC", "I-LOC"}), sent({"O", "O"})},
       {sent({"I-LOC", "I-LOC"}), sent({"B-PER", "O"})}, 1, 1, 0, 1.0 / 2, 1.0, 2.0 / 3},
  };
  for (const auto& k : cases) {
    const auto m = span_f1(k.gold, k.pred).micro;
    c.expect(m.tp == k.tp && m.fp == k.fp && m.fn == k.fn, std::string(k.name) + ": counts");
    c.expect(m.precision() == k.p, std::string(k.name) + ": precision");
    c.expect(m.recall() == k.r, std::string(k.name) + ": recall");
    c.expect(m.f1() == k.f1, std::string(k.name) + ": f1");
  }
}

void roundtrips_and_errors(Check& c) {
  testkit::GeneratorOptions opt;
  opt.max_len = 12;
  auto corpus = testkit::gen_random_corpus(kFuzzSeed + 3, 1000, opt);
  const std::vector<std::string> odd{"Großherzogtum", "“", "n't", "3.5", "-DOCSTART-x", "a#b", "é"};
  testkit::Rng rng(kFuzzSeed);
  for (auto& s : corpus.sources)
    for (auto& t : s.sentence.tokens)
      if (rng.chance(0.1)) t = odd[rng.below(odd.size())];

  const auto conll = write_conll(corpus.sources);
  const auto back = read_conll(conll, ReadMode::Strict);
  c.expect(back == corpus.sources, "CoNLL read(write(x)) != x");
  c.expect(write_conll(back) == conll, "CoNLL bytes not stable");

  const auto pharaoh = write_alignments(corpus.alignments);
  const auto links = read_alignments(pharaoh);
  c.expect(links == corpus.alignments, "Pharaoh read(write(x)) != x");
  c.expect(write_alignments(links) == pharaoh, "Pharaoh bytes not stable");

  std::size_t checked = 0;
  for (const auto& e : error_cases()) {
    const auto r = run_cli(e.args, e.stdin_bytes);
    c.expect(r.code == e.code, e.name + ": exit " + std::to_string(r.code) + ", expected " +
                                   std::to_string(e.code) + " (" + r.err + ")");
    c.expect(r.err.find(e.message) != std::string::npos, e.name + ": message '" + r.err + "'");
    ++checked;
  }
  // error classes at the library level
  auto throws = [](auto fn) -> int {
    try {
      fn();
    } catch (const ParseError&) {
      return 2;
    } catch (const ValidationError&) {
      return 1;
    } catch (...) {
      return 3;
    }
    return 0;
  };
  c.expect(throws([] { read_conll("a\tO\tx\n", ReadMode::Strict); }) == 2, "conll column class");
  c.expect(throws([] { read_conll("a\tI-X\n", ReadMode::Strict); }) == 1, "conll BIO class");
  c.expect(throws([] { read_alignments("0-0 1_1\n"); }) == 2, "pharaoh class");
  c.expect(throws([] { read_logits("{\"labels\":[\"O\"]\n"); }) == 2, "logits class");
  c.notes.insert(c.notes.begin(), std::to_string(checked) + " CLI error cases");
}

void stats_diagnostics(Check& c) {
  const auto f = fixture("stats");
  const std::vector<std::string> base{"stats", "--src-conll", path_of(f / "source.conll"),
                                      "--tgt-tokens", path_of(f / "target.txt"), "--align",
                                      path_of(f / "align.txt")};
  auto json_args = base;
  json_args.insert(json_args.end(), {"--format", "json"});
  const auto r = run_cli(json_args);
  c.expect(r.code == 0, "stats exit " + std::to_string(r.code) + " " + r.err);
  if (r.code != 0) return;
  const auto j = nlohmann::json::parse(r.out);
  bool seen_train = false, seen_test = false;
  for (const auto& d : j["train"])
    if (d["filters"] == "comp-src") {
      seen_train = true;
      c.expect(d["instances"] == 10 && d["kept"] == 7, "TRAIN comp-src counts");
      c.expect(d["recovered_rate"].get<double>() == 7.0 / 10, "recovered rate " + d["recovered_rate"].dump());
    }
  // hand count: 11 source spans, 10 projected without filters (one unaligned),
  // 8 survive comp-src
  for (const auto& d : j["test"])
    if (d["filters"] == "comp-src") {
      seen_test = true;
      c.expect(d["source_spans"] == 11 && d["baseline_projected_spans"] == 10 &&
                   d["projected_spans"] == 8,
               "TEST comp-src counts");
      c.expect(d["mapped_span_fraction"].get<double>() == 8.0 / 10,
               "mapped fraction " + d["mapped_span_fraction"].dump());
    }
  c.expect(seen_train && seen_test, "missing comp-src rows");
  const auto text = run_cli(base);
  c.expect(text.out.find("70.0%") != std::string::npos, "text table lacks 70.0%");
  c.expect(text.out.find("80.0%") != std::string::npos, "text table lacks 80.0%");
}

} // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria{
      {"1 oracle equivalence (src_len, tgt_len <= 4)", oracle_equivalence},
      {"2 golden CoNLL (Goethe example)", goethe_golden},
      {"3 BIO fuzz (10,000 instances, rerun byte-identical)", bio_fuzz},
      {"4 filter semantics (COMP-TGT, RSTR-TGT, monotonicity)", filter_semantics},
      {"5 ensemble contracts (fallback, swap, tie-break)", ensemble_contracts},
      {"6 identity pipeline (micro-F1 = 1.0)", identity_pipeline},
      {"7 metric fixture (5 rational cases)", metric_fixture},
      {"8 roundtrips and error classes", roundtrips_and_errors},
      {"9 stats diagnostics (70.0% recovered)", stats_diagnostics},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Check c;
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (c.ok ? "PASS " : "FAIL ") << name;
    if (!c.notes.empty()) {
      std::cout << " :: " << c.notes.front();
      for (std::size_t k = 1; k < c.notes.size(); ++k) std::cout << "; " << c.notes[k];
    }
    std::cout << std::endl;
    failed += !c.ok;
  }
  std::cout << (failed == 0 ? "ALL CRITERIA PASS" : std::to_string(failed) + " CRITERIA FAILED")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
