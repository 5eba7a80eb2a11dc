#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "parkkw/corpus_model.hpp"
#include "parkkw/event_log.hpp"
#include "parkkw/feedback_loop.hpp"

namespace parkkw {

// A planted keyword with a known correct score.
struct TrapSpec {
  std::string domain_id;
  std::string phrase;
  int gold = 0;
};

// Tab-separated `domain_id<TAB>phrase<TAB>gold` lines; '#' starts a comment.
std::vector<TrapSpec> load_traps(const std::filesystem::path& path);

enum class TaskStatus { Open, Judged, Expired };
std::string_view task_status_name(TaskStatus s);

struct Task {
  std::string task_id;
  int iteration = 0;
  std::string domain_id;
  std::string phrase;   // arm identity (stems) or trap phrase
  std::string display;  // what the assessor sees
  std::string snapshot_ref;
  bool is_trap = false;
  std::optional<int> trap_expected;
  TaskStatus status = TaskStatus::Open;
  int judgments = 0;
};

// The only task shape that leaves the service.
struct WireTask {
  std::string task_id;
  std::string domain_id;
  std::string phrase;
  std::string snapshot_url;

  nlohmann::json to_json() const;
};

struct AssessorSession {
  std::string assessor_id;
  std::vector<std::string> judged_tasks;
  int traps_assigned = 0;
  int traps_triggered = 0;
  bool flagged = false;
};

struct SubmitResult {
  bool accepted = false;
  bool flagged = false;
};

struct ServiceConfig {
  LoopConfig loop;
  // Non-excluded judgments after which a task is Judged; 0 = no cap.
  int judgments_per_task = 0;
  int min_traps_per_iteration = 5;
};

// Judging workflow over a corpus. Every state change is first written to the
// event log; constructing the service over an existing log replays it.
class JudgeService {
 public:
  using Clock = std::function<std::int64_t()>;  // unix milliseconds

  JudgeService(std::shared_ptr<const CorpusModel> corpus, std::vector<TrapSpec> traps,
               ServiceConfig config = {}, const std::filesystem::path& log_path = {},
               Clock clock = {});

  int open_iteration(std::uint64_t seed, std::size_t m, double trap_rate = 0.1);
  std::vector<WireTask> next_tasks(const std::string& assessor_id, std::size_t batch = 10) const;
  SubmitResult submit_judgment(const std::string& assessor_id, const std::string& task_id,
                               int score);
  IterationReport close_iteration(int iteration);

  IterationReport report(int iteration) const;
  std::vector<IterationReport> reports() const;
  std::optional<int> current_iteration() const;
  AssessorSession session(const std::string& assessor_id) const;
  // Archived page bytes and the charset they are in.
  std::pair<std::string, std::string> snapshot(const std::string& domain_id) const;
  std::vector<Task> tasks(int iteration) const;

  // Bandit states, reports, task statuses and flags as text; equal for
  // services holding the same state.
  std::string state_dump() const;
  std::string log_text() const;
  const CorpusModel& corpus() const { return *corpus_; }

 private:
  void apply(const nlohmann::json& event);
  void apply_start(const nlohmann::json& event);
  void apply_judgment(const nlohmann::json& event);
  void apply_close(const nlohmann::json& event);
  void commit(const nlohmann::json& event);
  bool is_flagged(const std::string& assessor_id) const;
  std::vector<std::size_t> assessor_order(const std::string& assessor_id) const;

  std::shared_ptr<const CorpusModel> corpus_;
  std::vector<TrapSpec> trap_pool_;
  ServiceConfig config_;
  Clock clock_;
  EventLog log_;
  FeedbackLoop loop_;

  int last_iteration_ = 0;
  std::optional<int> open_;
  std::uint64_t open_seed_ = 0;
  std::map<int, std::vector<Task>> tasks_;
  std::map<std::string, std::pair<int, std::size_t>> task_index_;
  std::vector<Judgment> judgments_;
  std::map<std::string, TrapTally> tallies_;
  std::map<std::string, std::vector<std::string>> judged_tasks_;
  // (assessor, iteration, domain, display) already judged
  std::set<std::tuple<std::string, int, std::string, std::string>> judged_slots_;
  std::set<std::string> flagged_;
  std::map<int, IterationReport> reports_;

  mutable std::shared_mutex mutex_;
};

}  // namespace parkkw
