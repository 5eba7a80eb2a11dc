#include "parkkw/feedback_loop.hpp"

#include <fstream>

#include "parkkw/errors.hpp"
#include "parkkw/features.hpp"

namespace parkkw {

RewardMap aggregate_rewards(const std::vector<Judgment>& judgments, int min_assessors) {
  std::map<Slot, std::map<std::string, int>> scores;
  for (const auto& j : judgments) {
    if (j.is_trap) continue;
    scores[{j.domain_id, j.phrase}].emplace(j.assessor_id, j.score);
  }
  RewardMap rewards;
  for (const auto& [slot, by_assessor] : scores) {
    if (static_cast<int>(by_assessor.size()) < min_assessors) continue;
    double sum = 0;
    for (const auto& [_, s] : by_assessor) sum += s;
    rewards.emplace(slot, sum / static_cast<double>(by_assessor.size()) / kMaxScore);
  }
  return rewards;
}

void TrapTally::add(const Judgment& j) {
  if (!j.is_trap || !j.trap_expected) return;
  ++assigned;
  triggered += trap_triggered(j);
}

std::vector<std::string> flag_careless(const std::vector<Judgment>& judgments,
                                       double trap_threshold, int min_traps) {
  std::map<std::string, TrapTally> tallies;
  for (const auto& j : judgments) tallies[j.assessor_id].add(j);
  std::vector<std::string> flagged;
  for (const auto& [id, t] : tallies) {
    if (t.flagged(trap_threshold, min_traps)) flagged.push_back(id);
  }
  return flagged;
}

namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

void append_csv_number(std::ofstream& out, const std::optional<double>& v) {
  if (v) out << *v;
}

}  // namespace

nlohmann::json IterationReport::to_json() const {
  nlohmann::json weights_json = nlohmann::json::object();
  for (const auto& [label, w] : weights) weights_json[label] = w;
  nlohmann::json agreement_json = {
      {"cohen_mean", optional_number(agreement.cohen_mean)},
      {"cohen_pairs", agreement.cohen_pairs},
      {"fleiss", optional_number(agreement.fleiss)},
      {"fleiss_label",
       agreement.fleiss ? nlohmann::json(kappa_label(*agreement.fleiss)) : nlohmann::json(nullptr)},
      {"fleiss_raters_per_item", agreement.fleiss_raters},
      {"fleiss_items", agreement.fleiss_items},
      {"fleiss_subsample", "lowest assessor ids down to the minimum rater count"},
      {"n_items", agreement.n_items},
      {"n_categories", agreement.n_categories},
  };
  return {
      {"iteration", iteration},
      {"precision", precision},
      {"judged_slots", judged_slots},
      {"per_domain_scores", per_domain_scores},
      {"weights", weights_json},
      {"agreement", agreement_json},
      {"excluded_assessors", excluded_assessors},
      {"dropped_domains", dropped_domains},
  };
}

void write_report_csvs(const std::filesystem::path& dir,
                       const std::vector<IterationReport>& reports) {
  std::filesystem::create_directories(dir);
  std::ofstream precision(dir / "precision.csv");
  std::ofstream weights(dir / "weights.csv");
  std::ofstream agreement(dir / "agreement.csv");
  if (!precision || !weights || !agreement) throw Error("cannot write reports to " + dir.string());
  for (auto* out : {&precision, &weights, &agreement}) out->precision(17);
  precision << "iteration,precision\n";
  weights << "iteration,feature,weight\n";
  agreement << "iteration,cohen_kappa_mean,fleiss_kappa\n";
  for (const auto& r : reports) {
    precision << r.iteration << ',' << r.precision << '\n';
    for (const auto& [label, w] : r.weights) weights << r.iteration << ',' << label << ',' << w << '\n';
    agreement << r.iteration << ',';
    append_csv_number(agreement, r.agreement.cohen_mean);
    agreement << ',';
    append_csv_number(agreement, r.agreement.fleiss);
    agreement << '\n';
  }
}

nlohmann::json judgment_to_json(const Judgment& j) {
  return {
      {"type", "judgment"},
      {"iteration", j.iteration},
      {"task_id", j.task_id},
      {"domain_id", j.domain_id},
      {"phrase", j.phrase},
      {"assessor_id", j.assessor_id},
      {"score", j.score},
      {"is_trap", j.is_trap},
      {"trap_expected", j.trap_expected ? nlohmann::json(*j.trap_expected) : nlohmann::json(nullptr)},
      {"submitted_at", j.submitted_at},
  };
}

Judgment judgment_from_json(const nlohmann::json& j) {
  Judgment out;
  out.iteration = j.at("iteration").get<int>();
  out.task_id = j.at("task_id").get<std::string>();
  out.domain_id = j.at("domain_id").get<std::string>();
  out.phrase = j.at("phrase").get<std::string>();
  out.assessor_id = j.at("assessor_id").get<std::string>();
  out.score = j.at("score").get<int>();
  out.is_trap = j.value("is_trap", false);
  if (j.contains("trap_expected") && !j["trap_expected"].is_null()) {
    out.trap_expected = j["trap_expected"].get<int>();
  }
  out.submitted_at = j.value("submitted_at", std::int64_t{0});
  return out;
}

std::uint64_t domain_seed(std::uint64_t seed, std::string_view domain_id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : domain_id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  // splitmix64 finalizer over the combined value
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

FeedbackLoop::FeedbackLoop(std::shared_ptr<const CorpusModel> corpus, LoopConfig config)
    : corpus_(std::move(corpus)), config_(config) {
  for (const auto& d : corpus_->domains) {
    if (!d.usable || d.arms.empty()) continue;
    BanditState state(kFeatureDim, config_.horizon, config_.delta);
    state.set_arm_count(static_cast<int>(d.arms.size()));
    states_.emplace(d.domain_id(), std::move(state));
    arms_.emplace(d.domain_id(), d.feature_matrix());
  }
}

std::vector<DomainPlan> FeedbackLoop::plan_iteration(std::size_t m, std::uint64_t seed) {
  std::vector<DomainPlan> plan;
  for (const auto& d : corpus_->domains) {
    const std::string& id = d.domain_id();
    if (dropped_.count(id)) continue;
    const auto state = states_.find(id);
    if (state == states_.end()) {
      plan.push_back({id, {}, false});
      continue;
    }
    const auto& arms = arms_.at(id);
    state->second.set_arm_count(static_cast<int>(arms.size()));
    DomainPlan p{id, {}, true};
    for (std::size_t i : select_arms(state->second, arms, m, domain_seed(seed, id), config_.grouping)) {
      p.phrases.push_back(d.arms[i].phrase);
    }
    plan.push_back(std::move(p));
  }
  return plan;
}

IterationReport FeedbackLoop::apply_rewards(int iteration, const RewardMap& rewards) {
  IterationReport report;
  report.iteration = iteration;
  std::map<std::string, std::pair<double, int>> per_domain;
  double total = 0;
  for (const auto& [slot, reward] : rewards) {
    const auto& [domain_id, phrase] = slot;
    total += reward;
    ++report.judged_slots;
    auto& acc = per_domain[domain_id];
    acc.first += reward;
    acc.second += 1;

    const auto state = states_.find(domain_id);
    if (state == states_.end() || dropped_.count(domain_id)) continue;
    const DomainModel* dm = corpus_->find(domain_id);
    const long arm = dm ? dm->find_arm(phrase) : -1;
    if (arm < 0) continue;
    try {
      state->second.update(dm->arms[static_cast<std::size_t>(arm)].features, reward);
    } catch (const HorizonExhausted&) {
      dropped_.insert(domain_id);
      report.dropped_domains.push_back(domain_id);
    }
  }
  report.precision = report.judged_slots > 0 ? total / report.judged_slots : 0.0;
  for (const auto& [id, acc] : per_domain) {
    report.per_domain_scores[id] = kMaxScore * acc.first / acc.second;
  }

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(kFeatureDim);
  int counted = 0;
  for (const auto& [_, s] : states_) {
    if (s.pulls() == 0) continue;
    mean += s.weight_estimate();
    ++counted;
  }
  if (counted > 0) mean /= counted;
  for (int i = 0; i < kFeatureDim; ++i) {
    report.weights.emplace_back(std::string(kFeatureLabels[static_cast<std::size_t>(i)]), mean(i));
  }
  return report;
}

IterationReport FeedbackLoop::close_iteration(int iteration,
                                              const std::vector<Judgment>& all_judgments) {
  const auto flagged =
      flag_careless(all_judgments, config_.trap_threshold, config_.min_traps);
  const std::set<std::string> excluded(flagged.begin(), flagged.end());
  std::vector<Judgment> kept;
  for (const auto& j : all_judgments) {
    if (j.iteration == iteration && !j.is_trap && !excluded.count(j.assessor_id)) kept.push_back(j);
  }
  IterationReport report = apply_rewards(iteration, aggregate_rewards(kept, config_.min_assessors));
  report.agreement = iteration_agreement(kept);
  report.excluded_assessors = flagged;
  return report;
}

std::string FeedbackLoop::snapshot() const {
  std::string out;
  for (const auto& [id, state] : states_) {
    out += "# domain " + id + (dropped_.count(id) ? " dropped" : "") + "\n";
    out += state.serialize();
  }
  return out;
}

std::vector<IterationReport> run_event_log(std::shared_ptr<const CorpusModel> corpus,
                                           LoopConfig config,
                                           const std::vector<nlohmann::json>& events,
                                           FeedbackLoop* out_loop) {
  FeedbackLoop loop(std::move(corpus), config);
  std::vector<Judgment> judgments;
  std::vector<IterationReport> reports;
  for (const auto& e : events) {
    const std::string type = e.at("type").get<std::string>();
    if (type == "iteration_start") {
      loop.plan_iteration(e.at("m").get<std::size_t>(), e.at("seed").get<std::uint64_t>());
    } else if (type == "judgment") {
      judgments.push_back(judgment_from_json(e));
    } else if (type == "iteration_close") {
      reports.push_back(loop.close_iteration(e.at("iteration").get<int>(), judgments));
    } else {
      throw Error("unknown event type '" + type + "'");
    }
  }
  if (out_loop) *out_loop = std::move(loop);
  return reports;
}

}  // namespace parkkw
