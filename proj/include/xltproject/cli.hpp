#ifndef XLTPROJECT_CLI_HPP
#define XLTPROJECT_CLI_HPP

// The xlt-project command line. `run` is the whole program minus process
// plumbing so tests can drive it with in-memory streams.
//
// Exit codes: 0 success, 1 usage or validation error, 2 I/O or parse error.
// Data goes to files or `out`; every diagnostic goes to `err`.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xltproject/corpus.hpp"
#include "xltproject/ensemble.hpp"
#include "xltproject/evaluate.hpp"
#include "xltproject/pretokenize.hpp"
#include "xltproject/projection.hpp"
#include "xltproject/testkit/sweep.hpp"

namespace xltproject::cli {

namespace fs = std::filesystem;

enum class Verbosity { Quiet, Warn, Info, Debug };

/// XLTPROJECT_LOG = quiet | warn (default) | info | debug.
inline Verbosity verbosity_from_env() {
  const char* v = std::getenv("XLTPROJECT_LOG");
  if (!v) return Verbosity::Warn;
  const std::string_view s(v);
  if (s == "quiet") return Verbosity::Quiet;
  if (s == "info") return Verbosity::Info;
  if (s == "debug") return Verbosity::Debug;
  return Verbosity::Warn;
}

class Logger {
public:
  Logger(std::ostream& err, Verbosity level) : err_(err), level_(level) {}

  void error(const std::string& msg) const { err_ << "xlt-project: error: " << msg << '\n'; }
  void warn(const std::string& msg) const { emit(Verbosity::Warn, "warning: ", msg); }
  void info(const std::string& msg) const { emit(Verbosity::Info, "", msg); }
  void debug(const std::string& msg) const { emit(Verbosity::Debug, "debug: ", msg); }

private:
  void emit(Verbosity at, const char* prefix, const std::string& msg) const {
    if (level_ >= at) err_ << "xlt-project: " << prefix << msg << '\n';
  }

  std::ostream& err_;
  Verbosity level_;
};

/// Fully or partially specified run settings. Unset fields fall back to the
/// next layer (flags over config file over subcommand defaults).
struct RunConfig {
  std::optional<Direction> direction;
  std::optional<FilterSet> filters;
  std::optional<PretokenizerMode> pretokenizer;
  std::optional<ReadMode> read_mode;
  std::optional<ConllColumns> columns;
  std::optional<std::size_t> parallelism;
  std::optional<EnsembleSpace> space;
  std::optional<ReportFormat> format;
  std::map<std::string, fs::path> paths; // keyed by flag name, absolute

  /// Fields set in `*this` win; the rest are taken from `base`.
  RunConfig over(const RunConfig& base) const {
    RunConfig r = *this;
    auto fill = [](auto& mine, const auto& theirs) {
      if (!mine) mine = theirs;
    };
    fill(r.direction, base.direction);
    fill(r.filters, base.filters);
    fill(r.pretokenizer, base.pretokenizer);
    fill(r.read_mode, base.read_mode);
    fill(r.columns, base.columns);
    fill(r.parallelism, base.parallelism);
    fill(r.space, base.space);
    fill(r.format, base.format);
    for (const auto& [k, v] : base.paths) r.paths.emplace(k, v);
    return r;
  }

  std::optional<fs::path> path(const std::string& key) const {
    auto it = paths.find(key);
    if (it == paths.end()) return std::nullopt;
    return it->second;
  }
};

inline const std::set<std::string>& path_keys() {
  static const std::set<std::string> keys{"input",        "output",       "diagnostics",
                                          "src-conll",    "tgt-tokens",   "tgt-conll",
                                          "align",        "train-logits", "test-logits",
                                          "gold",         "pred"};
  return keys;
}

inline const std::set<std::string>& value_keys() {
  static const std::set<std::string> keys{"filters", "mode",  "read-mode", "columns",
                                          "parallelism", "space", "format"};
  return keys;
}

namespace detail {

[[noreturn]] inline void bad_value(const std::string& key, const std::string& value,
                                   const char* expected) {
  throw ValidationError("invalid value '" + value + "' for " + key + " (expected " + expected +
                        ")");
}

/// Relative paths are resolved against `base_dir`; "-" stays as is (stdio).
inline void apply(RunConfig& cfg, const std::string& key, const std::string& value,
                  const fs::path& base_dir) {
  if (path_keys().count(key)) {
    cfg.paths[key] = value == "-" ? fs::path("-") : fs::absolute(base_dir / value).lexically_normal();
  } else if (key == "filters") {
    cfg.filters = FilterSet::parse(value);
  } else if (key == "mode") {
    if (value == "ws") cfg.pretokenizer = PretokenizerMode::Ws;
    else if (value == "rule") cfg.pretokenizer = PretokenizerMode::Rule;
    else if (value == "external") cfg.pretokenizer = PretokenizerMode::External;
    else bad_value(key, value, "ws, rule or external");
  } else if (key == "read-mode") {
    if (value == "strict") cfg.read_mode = ReadMode::Strict;
    else if (value == "repair") cfg.read_mode = ReadMode::Repair;
    else bad_value(key, value, "strict or repair");
  } else if (key == "columns") {
    if (value == "token-tag") cfg.columns = ConllColumns::TokenTag;
    else if (value == "first-last") cfg.columns = ConllColumns::FirstLast;
    else bad_value(key, value, "token-tag or first-last");
  } else if (key == "parallelism") {
    std::size_t n = 0;
    if (!xltproject::detail::parse_index(value, n) || n == 0)
      bad_value(key, value, "a positive integer");
    cfg.parallelism = n;
  } else if (key == "space") {
    if (value == "logits") cfg.space = EnsembleSpace::Logits;
    else if (value == "probs") cfg.space = EnsembleSpace::Probs;
    else bad_value(key, value, "logits or probs");
  } else if (key == "format") {
    if (value == "text") cfg.format = ReportFormat::Text;
    else if (value == "json") cfg.format = ReportFormat::Json;
    else bad_value(key, value, "text or json");
  } else {
    throw ValidationError("unknown config key '" + key + "'");
  }
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

} // namespace detail

/// Flat "key = value" text; '#' starts a comment line. Keys are the long flag
/// names (e.g. filters, src-conll, parallelism).
inline RunConfig parse_config(std::string_view text, const fs::path& base_dir) {
  RunConfig cfg;
  const auto lines = xltproject::detail::split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto line = detail::trim(lines[n]);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", n + 1);
    detail::apply(cfg, detail::trim(std::string_view(line).substr(0, eq)),
                  detail::trim(std::string_view(line).substr(eq + 1)), base_dir);
  }
  return cfg;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return bytes;
}

inline RunConfig load_config(const fs::path& path) {
  const auto abs = fs::absolute(path);
  return parse_config(read_file(abs), abs.parent_path());
}

/// Writes via a sibling temp file and rename, so a failed run never leaves a
/// truncated output behind.
inline void write_file_atomic(const fs::path& path, const std::string& bytes) {
  fs::path tmp = path;
  tmp += ".tmp-xltproject";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed for '" + path.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

namespace detail {

inline std::string read_input(const std::optional<fs::path>& path, Streams& io) {
  if (!path || *path == "-")
    return std::string((std::istreambuf_iterator<char>(io.in)), std::istreambuf_iterator<char>());
  return read_file(*path);
}

inline void write_output(const std::optional<fs::path>& path, const std::string& bytes,
                         Streams& io) {
  if (!path || *path == "-") {
    io.out << bytes;
    io.out.flush();
    return;
  }
  write_file_atomic(*path, bytes);
}

inline const fs::path& require(const RunConfig& cfg, const std::string& key) {
  auto it = cfg.paths.find(key);
  if (it == cfg.paths.end()) throw ValidationError("--" + key + " is required");
  return it->second;
}

/// One sentence per line, tokens separated by single spaces.
inline std::vector<Sentence> parse_token_lines(std::string_view bytes) {
  std::vector<Sentence> out;
  const auto lines = xltproject::detail::split_lines(bytes);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    try {
      out.push_back(pretokenize(lines[n], PretokenizerMode::External));
    } catch (const ValidationError& e) {
      throw ParseError(e.message(), n + 1);
    }
  }
  return out;
}

inline std::vector<Sentence> read_targets(const RunConfig& cfg) {
  const auto tokens = cfg.path("tgt-tokens");
  const auto conll = cfg.path("tgt-conll");
  if (tokens && conll) throw ValidationError("--tgt-tokens and --tgt-conll are exclusive");
  if (tokens) return parse_token_lines(read_file(*tokens));
  if (!conll) throw ValidationError("one of --tgt-tokens or --tgt-conll is required");
  std::vector<Sentence> out;
  for (auto& s : read_conll(read_file(*conll), ReadMode::Repair,
                            cfg.columns.value_or(ConllColumns::TokenTag)))
    out.push_back(std::move(s.sentence));
  return out;
}

inline std::vector<LabeledSentence> read_sources(const RunConfig& cfg, ReadMode fallback) {
  return read_conll(read_file(require(cfg, "src-conll")), cfg.read_mode.value_or(fallback),
                    cfg.columns.value_or(ConllColumns::TokenTag));
}

inline int cmd_pretokenize(const RunConfig& cfg, Streams& io) {
  const auto mode = cfg.pretokenizer.value_or(PretokenizerMode::Ws);
  const auto text = read_input(cfg.path("input"), io);
  std::string out;
  const auto lines = xltproject::detail::split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    try {
      out += detokenize_preview(pretokenize(lines[n], mode));
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(n + 1) + ": " + e.message(), n);
    }
    out += '\n';
  }
  write_output(cfg.path("output"), out, io);
  return 0;
}

inline int cmd_project(const RunConfig& cfg, Streams& io, const Logger& log) {
  const Direction direction = *cfg.direction;
  const FilterSet filters = cfg.filters.value_or(FilterSet{});
  check_filters(direction, filters);
  const auto sources =
      read_sources(cfg, direction == Direction::Train ? ReadMode::Strict : ReadMode::Repair);
  const auto targets = read_targets(cfg);
  const auto alignments = read_alignments(read_file(require(cfg, "align")));

  const auto result = project_corpus(sources, targets, alignments, direction, filters,
                                     cfg.parallelism.value_or(1));
  std::vector<LabeledSentence> projected;
  for (const auto& o : result.outcomes)
    if (o.projected) projected.push_back(*o.projected);
  const auto& d = result.diagnostics;
  if (d.omitted_spans > 0)
    log.warn(std::to_string(d.omitted_spans) + " span(s) could not be projected and were omitted");
  log.info(std::string(to_string(direction)) + " projection with filters " + filters.name() +
           ": kept " + std::to_string(d.kept) + "/" + std::to_string(d.instances) +
           " instances, " + std::to_string(d.projected_spans) + "/" +
           std::to_string(d.source_spans) + " spans");

  const std::string conll = write_conll(projected);
  const std::string diag = to_json(d).dump(2) + "\n";
  auto output = cfg.path("output");
  auto sidecar = cfg.path("diagnostics");
  if (!sidecar && output && *output != "-") {
    sidecar = *output;
    *sidecar += ".diag.json";
  }
  write_output(output, conll, io);
  if (sidecar) write_file_atomic(*sidecar, diag);
  return 0;
}

inline int cmd_ensemble(const RunConfig& cfg, Streams& io) {
  const FilterSet filters = cfg.filters.value_or(FilterSet{});
  check_filters(Direction::Test, filters);
  const auto train = read_logits(read_file(require(cfg, "train-logits")));
  const auto test = read_logits(read_file(require(cfg, "test-logits")));
  const auto alignments = read_alignments(read_file(require(cfg, "align")));
  const auto out = ensemble_corpus(train, test, alignments, filters,
                                   cfg.space.value_or(EnsembleSpace::Logits),
                                   cfg.parallelism.value_or(1));
  write_output(cfg.path("output"), write_conll(out), io);
  return 0;
}

inline int cmd_evaluate(const RunConfig& cfg, Streams& io) {
  const auto columns = cfg.columns.value_or(ConllColumns::TokenTag);
  const auto gold = read_conll(read_file(require(cfg, "gold")),
                               cfg.read_mode.value_or(ReadMode::Strict), columns);
  const auto pred = read_conll(read_file(require(cfg, "pred")), ReadMode::Repair, columns);
  const auto report = span_f1(gold, pred);
  write_output(cfg.path("output"), render_report(report, cfg.format.value_or(ReportFormat::Text)),
               io);
  return 0;
}

inline std::string percent(std::optional<double> v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", *v * 100.0);
  return buf;
}

inline int cmd_stats(const RunConfig& cfg, Streams& io) {
  const auto sources = read_sources(cfg, ReadMode::Strict);
  const auto targets = read_targets(cfg);
  const auto alignments = read_alignments(read_file(require(cfg, "align")));
  const std::size_t workers = cfg.parallelism.value_or(1);

  std::vector<CorpusDiagnostics> train, test;
  for (const auto& f : FilterSet::all_legal(Direction::Train))
    train.push_back(
        project_corpus(sources, targets, alignments, Direction::Train, f, workers).diagnostics);
  for (const auto& f : FilterSet::all_legal(Direction::Test))
    test.push_back(
        project_corpus(sources, targets, alignments, Direction::Test, f, workers).diagnostics);

  std::string out;
  if (cfg.format.value_or(ReportFormat::Text) == ReportFormat::Json) {
    nlohmann::ordered_json j;
    j["train"] = nlohmann::ordered_json::array();
    j["test"] = nlohmann::ordered_json::array();
    for (const auto& d : train) j["train"].push_back(to_json(d));
    for (const auto& d : test) j["test"].push_back(to_json(d));
    out = j.dump(2) + "\n";
  } else {
    char buf[200];
    out += "translate-train: recovered instances\n";
    std::snprintf(buf, sizeof buf, "%-28s %10s %10s %10s\n", "filters", "kept", "instances",
                  "recovered");
    out += buf;
    for (const auto& d : train) {
      std::snprintf(buf, sizeof buf, "%-28s %10zu %10zu %10s\n", d.filters.name().c_str(), d.kept,
                    d.instances, percent(d.recovered_rate).c_str());
      out += buf;
    }
    out += "\ntranslate-test: mapped labeled spans relative to none\n";
    std::snprintf(buf, sizeof buf, "%-28s %10s %10s %10s\n", "filters", "projected", "none",
                  "mapped");
    out += buf;
    for (const auto& d : test) {
      std::snprintf(buf, sizeof buf, "%-28s %10zu %10zu %10s\n", d.filters.name().c_str(),
                    d.projected_spans, d.baseline_projected_spans.value_or(0),
                    percent(d.mapped_span_fraction).c_str());
      out += buf;
    }
  }
  write_output(cfg.path("output"), out, io);
  return 0;
}

inline int cmd_selftest(bool exhaustive, std::optional<std::size_t> fuzz, std::uint64_t seed,
                        std::size_t workers, Streams& io, const Logger& log) {
  if (!exhaustive && !fuzz) throw ValidationError("selftest needs --exhaustive and/or --fuzz N");
  bool ok = true;
  if (exhaustive) {
    const auto rep = testkit::exhaustive_sweep(4, workers);
    io.out << "exhaustive: " << rep.instances << " instances, " << rep.disagreements
           << " disagreements, " << rep.bio_violations << " BIO violations, "
           << rep.monotonicity_violations << " monotonicity violations, "
           << rep.rstr_length_violations << " RSTR-TGT length violations\n";
    for (const auto& e : rep.examples) log.error(e);
    ok = ok && rep.ok();
  }
  if (fuzz) {
    const auto first = testkit::fuzz_pipeline(seed, *fuzz, 1);
    const auto second = testkit::fuzz_pipeline(seed, *fuzz, workers);
    const bool same = first.outputs == second.outputs;
    io.out << "fuzz: seed " << seed << ", " << first.instances << " instances, " << first.runs
           << " runs, " << first.bio_violations << " BIO violations, " << first.crashes
           << " crashes, " << first.rstr_length_violations << " RSTR-TGT length violations, rerun "
           << (same ? "identical" : "DIFFERENT") << "\n";
    for (const auto& e : first.examples) log.error(e);
    ok = ok && first.ok() && same;
  }
  io.out.flush();
  return ok ? 0 : 1;
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
               std::ostream& err) {
  Streams io{in, out, err};
  const Logger log(err, verbosity_from_env());

  CLI::App app{"Word-alignment label projection for cross-lingual token classification",
               "xlt-project"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* app;
    std::optional<Direction> direction;
    std::map<std::string, std::string> raw;
    std::map<std::string, CLI::Option*> opts;
    std::string config;
  };
  std::vector<Sub> subs;
  subs.reserve(8);
  auto add = [&](const char* name, const char* help, std::optional<Direction> direction,
                 std::vector<std::pair<std::string, std::string>> keys) -> Sub& {
    Sub& s = subs.emplace_back();
    s.app = app.add_subcommand(name, help);
    s.direction = direction;
    for (const auto& [key, what] : keys)
      s.opts[key] = s.app->add_option((key == "output" ? "-o," : "") + ("--" + key), s.raw[key], what);
    s.app->add_option("--config", s.config, "flat key=value file; flags override it");
    s.opts["parallelism"] =
        s.app->add_option("-j,--parallelism", s.raw["parallelism"], "worker threads (default 1)");
    return s;
  };

  const std::pair<std::string, std::string> output{"output", "output file (default stdout)"};
  add("pretokenize", "split raw sentences (one per line) into tokens", std::nullopt,
      {{"mode", "ws | rule | external (default ws)"}, {"input", "input file (default stdin)"},
       output});
  const std::vector<std::pair<std::string, std::string>> projection_keys{
      {"src-conll", "source CoNLL"},
      {"tgt-tokens", "target sentences, one space-tokenized sentence per line"},
      {"tgt-conll", "target sentences as CoNLL (tags ignored)"},
      {"align", "Pharaoh alignments, 0-based i-j"},
      {"filters", "comma list of comp-src,comp-tgt,comp-ins,rstr-tgt or none"},
      {"read-mode", "strict | repair for the source CoNLL"},
      {"columns", "token-tag | first-last (CoNLL-2003 input)"},
      output,
      {"diagnostics", "diagnostics JSON (default <output>.diag.json)"}};
  add("project-train", "project gold labels onto translated training data", Direction::Train,
      projection_keys);
  add("project-test", "project predictions from a translated test set back", Direction::Test,
      projection_keys);
  add("ensemble", "combine translate-train and translate-test logits", Direction::Test,
      {{"train-logits", "logits JSONL over the original sentences"},
       {"test-logits", "logits JSONL over the translations"},
       {"align", "Pharaoh alignments translation->original"},
       {"filters", "TEST filters for the projection step"},
       {"space", "logits | probs (default logits)"},
       output});
  add("evaluate", "span-level precision, recall and F1", std::nullopt,
      {{"gold", "gold CoNLL"},
       {"pred", "predicted CoNLL (read in repair mode)"},
       {"format", "text | json (default text)"},
       {"read-mode", "strict | repair for the gold file (default strict)"},
       {"columns", "token-tag | first-last"},
       output});
  add("stats", "recovered-instance and mapped-span tables for every filter set", std::nullopt,
      {{"src-conll", "source CoNLL"},
       {"tgt-tokens", "target sentences, one per line"},
       {"tgt-conll", "target sentences as CoNLL"},
       {"align", "Pharaoh alignments"},
       {"read-mode", "strict | repair"},
       {"columns", "token-tag | first-last"},
       {"format", "text | json"},
       output});

  Sub& self = add("selftest", "oracle sweep and seeded fuzzing", std::nullopt, {});
  bool exhaustive = false;
  std::size_t fuzz_n = 0;
  std::uint64_t seed = 0;
  self.app->add_flag("--exhaustive", exhaustive, "compare with the brute-force oracle");
  auto* fuzz_opt = self.app->add_option("--fuzz", fuzz_n, "number of random instances");
  self.app->add_option("--seed", seed, "fuzz seed (default 0)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    // subcommand help requests surface here too
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      app.exit(e, out, err);
      return 0;
    }
    log.error(e.what());
    return 1;
  }

  try {
    for (auto& s : subs) {
      if (!s.app->parsed()) continue;
      RunConfig flags;
      flags.direction = s.direction;
      const auto cwd = fs::current_path();
      for (const auto& [key, opt] : s.opts)
        if (opt->count() > 0) detail::apply(flags, key, s.raw[key], cwd);
      RunConfig file;
      if (!s.config.empty()) file = load_config(s.config);
      const RunConfig cfg = flags.over(file);
      log.debug("running " + s.app->get_name());

      const std::string name = s.app->get_name();
      if (name == "pretokenize") return detail::cmd_pretokenize(cfg, io);
      if (name == "project-train" || name == "project-test") return detail::cmd_project(cfg, io, log);
      if (name == "ensemble") return detail::cmd_ensemble(cfg, io);
      if (name == "evaluate") return detail::cmd_evaluate(cfg, io);
      if (name == "stats") return detail::cmd_stats(cfg, io);
      if (name == "selftest")
        return detail::cmd_selftest(exhaustive,
                                    fuzz_opt->count() ? std::optional<std::size_t>(fuzz_n)
                                                      : std::nullopt,
                                    seed, cfg.parallelism.value_or(1), io, log);
    }
  } catch (const ValidationError& e) {
    log.error(e.what());
    return 1;
  } catch (const ParseError& e) {
    log.error(e.what());
    return 2;
  } catch (const IoError& e) {
    log.error(e.what());
    return 2;
  } catch (const fs::filesystem_error& e) {
    log.error(e.what());
    return 2;
  }
  return 1;
}

} // namespace xltproject::cli

#endif // XLTPROJECT_CLI_HPP
