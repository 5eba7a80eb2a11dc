#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "parkkw/agreement.hpp"
#include "parkkw/corpus_model.hpp"
#include "parkkw/judgment.hpp"
#include "parkkw/linrel.hpp"

namespace parkkw {

using Slot = std::pair<std::string, std::string>;  // (domain_id, phrase)
using RewardMap = std::map<Slot, double>;

// Mean score / 5 per slot over distinct assessors (first judgment of each
// assessor counts). Traps are skipped; slots with fewer than min_assessors
// assessors are withheld.
RewardMap aggregate_rewards(const std::vector<Judgment>& judgments, int min_assessors = 2);

struct TrapTally {
  int assigned = 0;
  int triggered = 0;

  void add(const Judgment& j);
  bool flagged(double threshold, int min_traps) const {
    return assigned >= min_traps && triggered >= threshold * assigned;
  }
};

// Assessors whose triggered/judged trap ratio reaches the threshold with at
// least min_traps traps judged. Sorted ids.
std::vector<std::string> flag_careless(const std::vector<Judgment>& judgments,
                                       double trap_threshold = 0.3, int min_traps = 5);

struct LoopConfig {
  int horizon = 100;
  double delta = 0.05;
  SigmaGrouping grouping = SigmaGrouping::Additive;
  int min_assessors = 2;
  double trap_threshold = 0.3;
  int min_traps = 5;
};

struct DomainPlan {
  std::string domain_id;
  std::vector<std::string> phrases;  // empty for an unusable domain
  bool usable = true;
};

struct IterationReport {
  int iteration = 0;
  double precision = 0.0;
  int judged_slots = 0;
  std::map<std::string, double> per_domain_scores;  // mean 0-5 score
  std::vector<std::pair<std::string, double>> weights;
  AgreementStats agreement;
  std::vector<std::string> excluded_assessors;
  std::vector<std::string> dropped_domains;  // horizon reached this iteration

  nlohmann::json to_json() const;
};

// Writes precision.csv, weights.csv and agreement.csv into dir.
void write_report_csvs(const std::filesystem::path& dir,
                       const std::vector<IterationReport>& reports);

nlohmann::json judgment_to_json(const Judgment& j);
Judgment judgment_from_json(const nlohmann::json& j);

// One LinRel bandit per domain over the domain's candidate arms.
class FeedbackLoop {
 public:
  FeedbackLoop(std::shared_ptr<const CorpusModel> corpus, LoopConfig config = {});

  // Up to m phrases per active domain. Deterministic in (state, m, seed).
  std::vector<DomainPlan> plan_iteration(std::size_t m, std::uint64_t seed);

  // Updates bandits in (domain_id, phrase) order; slots of unusable domains
  // count toward precision only.
  IterationReport apply_rewards(int iteration, const RewardMap& rewards);

  // Flags careless assessors over all judgments so far, then aggregates this
  // iteration's remaining judgments, updates bandits and measures agreement.
  IterationReport close_iteration(int iteration, const std::vector<Judgment>& all_judgments);

  const CorpusModel& corpus() const { return *corpus_; }
  const LoopConfig& config() const { return config_; }
  const std::map<std::string, BanditState>& states() const { return states_; }
  const std::set<std::string>& dropped() const { return dropped_; }

  // Every bandit serialized, domain by domain.
  std::string snapshot() const;

 private:
  std::shared_ptr<const CorpusModel> corpus_;
  LoopConfig config_;
  std::map<std::string, BanditState> states_;
  std::map<std::string, std::vector<Eigen::VectorXd>> arms_;
  std::set<std::string> dropped_;
};

// Offline reconstruction: replays an event log (iteration_start, judgment,
// iteration_close records) straight through a FeedbackLoop.
std::vector<IterationReport> run_event_log(std::shared_ptr<const CorpusModel> corpus,
                                           LoopConfig config,
                                           const std::vector<nlohmann::json>& events,
                                           FeedbackLoop* out_loop = nullptr);

std::uint64_t domain_seed(std::uint64_t seed, std::string_view domain_id);

}  // namespace parkkw
