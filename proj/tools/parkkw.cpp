#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "parkkw/corpus_model.hpp"
#include "parkkw/errors.hpp"
#include "parkkw/feedback_loop.hpp"
#include "parkkw/http_api.hpp"
#include "parkkw/judge_service.hpp"
#include "parkkw/simulation.hpp"

using namespace parkkw;
using nlohmann::json;

namespace {

struct Common {
  std::string data_dir = Resources::default_data_dir().string();
  std::string bm25f_config;
};

struct BanditOptions {
  int horizon = 100;
  double delta = 0.05;
  std::string grouping = "additive";

  LoopConfig loop() const {
    LoopConfig c;
    c.horizon = horizon;
    c.delta = delta;
    c.grouping = parse_sigma_grouping(grouping);
    return c;
  }
};

void add_bandit_options(CLI::App* cmd, BanditOptions& o) {
  cmd->add_option("--horizon", o.horizon, "Planned pulls per domain (T)")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--delta", o.delta, "Confidence parameter")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--sigma-grouping", o.grouping, "Confidence width: additive or scaled")
      ->capture_default_str()
      ->check(CLI::IsMember({"additive", "scaled"}));
}

Bm25fParams bm25f_params(const Common& c) {
  return c.bm25f_config.empty() ? Bm25fParams::load(std::filesystem::path(c.data_dir) / "bm25f.toml")
                                : Bm25fParams::load(c.bm25f_config);
}

std::shared_ptr<const CorpusModel> load_corpus(const Common& c, const std::string& dir) {
  static const Resources resources = Resources::load(c.data_dir);
  return load_corpus_model(dir, resources, bm25f_params(c));
}

int cmd_ingest(const Common& c, const std::string& source, const std::string& id,
               const std::vector<std::string>& anchors, bool fetch, int timeout_ms) {
  const Resources resources = Resources::load(c.data_dir);
  DomainRecord record = load_record(source, anchors, {}, {fetch, timeout_ms});
  record.domain_id = id;
  if (id.empty()) {
    const auto scheme = source.find("://");
    record.domain_id = scheme == std::string::npos
                           ? std::filesystem::path(source).parent_path().filename().string()
                           : source.substr(scheme + 3, source.find('/', scheme + 3) - scheme - 3);
  }
  const std::string charset = detect_encoding(record);
  FieldedDocument doc = parse_fields(record, charset, "");
  json out = {{"domain_id", record.domain_id}, {"encoding", charset}, {"fetched_at", record.fetched_at}};
  try {
    const auto guess = resources.detector.detect(doc.title + "\n" + doc.meta_description + "\n" +
                                                 doc.headers + "\n" + doc.content);
    out["language"] = guess.code;
    out["language_confidence"] = guess.confidence;
  } catch (const Undetectable& e) {
    out["language"] = nullptr;
    out["language_error"] = e.what();
  }
  json fields = json::object();
  for (Field f : kAllFields) fields[std::string(field_name(f))] = doc.field(f);
  out["fields"] = fields;
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_extract(const Common& c, const std::string& corpus_dir, std::size_t top, const std::string& only) {
  const auto corpus = load_corpus(c, corpus_dir);
  std::cout << "domain_id\trank\tkeyword\tphrase\tscore\n";
  for (const auto& dm : corpus->domains) {
    if (!only.empty() && dm.domain_id() != only) continue;
    if (!dm.usable) {
      std::cerr << dm.domain_id() << ": unusable (" << dm.unusable_reason << ")\n";
      continue;
    }
    std::map<std::string, std::string> surface;
    for (const auto& cand : dm.candidates) surface.emplace(cand.phrase, cand.surface);
    const auto ranked = rank_bm25f(dm.candidates, dm.field_lens, corpus->params, corpus->idf, top);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      std::printf("%s\t%zu\t%s\t%s\t%.6f\n", dm.domain_id().c_str(), i + 1,
                  surface.at(ranked[i].phrase).c_str(), ranked[i].phrase.c_str(), ranked[i].score);
    }
  }
  return 0;
}

int cmd_simulate(SyntheticConfig cfg, const std::string& grouping, std::uint64_t seed_base, int seeds) {
  cfg.grouping = parse_sigma_grouping(grouping);
  double linrel = 0;
  double random = 0;
  double best = 0;
  int learning = 0;
  // Leading and trailing fifth of each run.
  const std::size_t window = static_cast<std::size_t>(cfg.horizon) / 5;
  for (int s = 0; s < seeds; ++s) {
    const auto run = run_synthetic(seed_base + static_cast<std::uint64_t>(s), cfg);
    linrel += run.linrel_total();
    random += run.random_total();
    best += run.best_expected * cfg.horizon;
    learning += run.linrel_mean(run.linrel_rewards.size() - window, run.linrel_rewards.size()) >
                run.linrel_mean(0, window);
  }
  std::printf("seeds %d (from %llu), D=%d K=%d T=%d noise=%g grouping=%s\n", seeds,
              static_cast<unsigned long long>(seed_base), cfg.dim, cfg.arms, cfg.horizon, cfg.noise,
              grouping.c_str());
  std::printf("mean cumulative reward: linrel %.3f  random %.3f  best arm %.3f\n", linrel / seeds,
              random / seeds, best / seeds);
  std::printf("linrel / random: %.4f\n", linrel / random);
  std::printf("trailing mean > leading mean: %d/%d seeds\n", learning, seeds);
  return 0;
}

void print_reports(const std::vector<IterationReport>& reports) {
  std::printf("iteration\tprecision\tjudged\tcohen\tfleiss\texcluded\n");
  for (const auto& r : reports) {
    std::printf("%d\t%.4f\t%d\t%s\t%s\t%zu\n", r.iteration, r.precision, r.judged_slots,
                r.agreement.cohen_mean ? std::to_string(*r.agreement.cohen_mean).c_str() : "-",
                r.agreement.fleiss ? std::to_string(*r.agreement.fleiss).c_str() : "-",
                r.excluded_assessors.size());
  }
}

int cmd_experiment(const Common& c, const std::string& corpus_dir, AssessorSimConfig cfg,
                   const BanditOptions& bandit, std::uint64_t seed, const std::string& out_dir) {
  cfg.loop = bandit.loop();
  const auto reports = run_simulated_assessors(load_corpus(c, corpus_dir), cfg, seed);
  print_reports(reports);
  if (!out_dir.empty()) {
    write_report_csvs(out_dir, reports);
    std::cerr << "reports written to " << out_dir << '\n';
  }
  return 0;
}

int cmd_serve(const Common& c, const std::string& corpus_dir, const std::string& traps,
              const std::string& log, const std::string& host, int port, const BanditOptions& bandit,
              int per_task) {
  ServiceConfig cfg;
  cfg.loop = bandit.loop();
  cfg.judgments_per_task = per_task;
  JudgeService service(load_corpus(c, corpus_dir), traps.empty() ? std::vector<TrapSpec>{} : load_traps(traps),
                       cfg, log);
  if (const auto open = service.current_iteration()) {
    std::cerr << "replayed " << log << ", iteration " << *open << " open\n";
  }
  JudgeHttpServer server(service);
  std::cerr << "listening on http://" << host << ":" << port << '\n';
  server.run(host, port);
  return 0;
}

int cmd_report(const Common& c, const std::string& corpus_dir, const std::string& log,
               const BanditOptions& bandit, const std::string& out_dir, bool as_json) {
  const auto reports = run_event_log(load_corpus(c, corpus_dir), bandit.loop(), EventLog::read(log));
  if (as_json) {
    json all = json::array();
    for (const auto& r : reports) all.push_back(r.to_json());
    std::cout << all.dump(2) << '\n';
  } else {
    print_reports(reports);
  }
  if (!out_dir.empty()) write_report_csvs(out_dir, reports);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Keyword selection for parked domains with a LinRel bandit"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--data-dir", common.data_dir, "Stopwords, lexicon, language profiles")->capture_default_str();
  app.add_option("--bm25f", common.bm25f_config, "BM25F parameter file (default: <data-dir>/bm25f.toml)");

  std::string source;
  std::string domain_id;
  std::vector<std::string> anchors;
  bool fetch = false;
  int timeout_ms = 5000;
  auto* ingest = app.add_subcommand("ingest", "Parse one page into scoring fields (JSON)");
  ingest->add_option("source", source, "HTML file, or http(s) URL with --fetch")->required();
  ingest->add_option("--domain", domain_id, "Domain id (default: the file's directory name)");
  ingest->add_option("--anchor", anchors, "Anchor text pointing at the domain (repeatable)");
  ingest->add_flag("--fetch", fetch, "Allow live HTTP fetches");
  ingest->add_option("--fetch-timeout-ms", timeout_ms, "HTTP timeout")->capture_default_str();

  std::string corpus_dir;
  std::size_t top = 3;
  std::string only;
  auto* extract = app.add_subcommand("extract", "BM25F baseline: top keywords per domain (TSV)");
  extract->add_option("--corpus", corpus_dir, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  extract->add_option("--top", top, "Keywords per domain")->capture_default_str();
  extract->add_option("--domain", only, "Only this domain");

  SyntheticConfig synth;
  std::string grouping = "additive";
  std::uint64_t seed_base = 1000;
  int seeds = 50;
  auto* simulate = app.add_subcommand("simulate", "LinRel vs. random policy on a synthetic linear environment");
  simulate->add_option("--seeds", seeds, "Number of runs")->capture_default_str();
  simulate->add_option("--seed-base", seed_base, "First seed")->capture_default_str();
  simulate->add_option("--dim", synth.dim, "Feature dimension")->capture_default_str();
  simulate->add_option("--arms", synth.arms, "Arms")->capture_default_str();
  simulate->add_option("--horizon", synth.horizon, "Pulls per run")->capture_default_str();
  simulate->add_option("--noise", synth.noise, "Reward noise standard deviation")->capture_default_str();
  simulate->add_option("--delta", synth.delta, "Confidence parameter")->capture_default_str();
  simulate->add_option("--sigma-grouping", grouping, "additive or scaled")
      ->capture_default_str()
      ->check(CLI::IsMember({"additive", "scaled"}));

  AssessorSimConfig sim;
  BanditOptions bandit;
  std::uint64_t seed = 1;
  std::string out_dir;
  auto* experiment = app.add_subcommand("experiment", "Feedback loop with simulated assessors; writes CSV reports");
  experiment->add_option("--corpus", corpus_dir, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  experiment->add_option("--iterations", sim.iterations, "Iterations")->capture_default_str();
  experiment->add_option("--assessors", sim.assessors, "Simulated assessors")->capture_default_str();
  experiment->add_option("-m", sim.m, "Keywords per domain per iteration")->capture_default_str();
  experiment->add_option("--seed", seed, "Run seed")->capture_default_str();
  experiment->add_option("--out", out_dir, "Directory for precision/weights/agreement CSVs");
  add_bandit_options(experiment, bandit);

  std::string traps;
  std::string log;
  std::string host = "127.0.0.1";
  int port = 8080;
  int per_task = 0;
  auto* serve = app.add_subcommand("serve", "Judging HTTP API backed by an event log");
  serve->add_option("--corpus", corpus_dir, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  serve->add_option("--traps", traps, "Trap file: domain_id<TAB>phrase<TAB>gold");
  serve->add_option("--log", log, "Event log (replayed on start, appended to)")->required();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--port", port, "Port")->capture_default_str();
  serve->add_option("--judgments-per-task", per_task, "Close a task after this many judgments (0 = never)")
      ->capture_default_str();
  add_bandit_options(serve, bandit);

  bool as_json = false;
  auto* report = app.add_subcommand("report", "Recompute iteration reports offline from an event log");
  report->add_option("--corpus", corpus_dir, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  report->add_option("--log", log, "Event log")->required()->check(CLI::ExistingFile);
  report->add_option("--out", out_dir, "Directory for CSV reports");
  report->add_flag("--json", as_json, "Print full reports as JSON");
  add_bandit_options(report, bandit);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return cmd_ingest(common, source, domain_id, anchors, fetch, timeout_ms);
    if (*extract) return cmd_extract(common, corpus_dir, top, only);
    if (*simulate) return cmd_simulate(synth, grouping, seed_base, seeds);
    if (*experiment) return cmd_experiment(common, corpus_dir, sim, bandit, seed, out_dir);
    if (*serve) return cmd_serve(common, corpus_dir, traps, log, host, port, bandit, per_task);
    if (*report) return cmd_report(common, corpus_dir, log, bandit, out_dir, as_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
