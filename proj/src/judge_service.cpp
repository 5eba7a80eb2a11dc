#include "parkkw/judge_service.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>

#include "parkkw/errors.hpp"

namespace parkkw {

std::vector<TrapSpec> load_traps(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open traps file " + path.string());
  std::vector<TrapSpec> traps;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    TrapSpec t;
    std::string gold;
    if (!std::getline(fields, t.domain_id, '\t') || !std::getline(fields, t.phrase, '\t') ||
        !std::getline(fields, gold)) {
      throw Error(path.string() + ":" + std::to_string(number) + ": expected 3 tab-separated fields");
    }
    try {
      t.gold = std::stoi(gold);
    } catch (const std::exception&) {
      throw Error(path.string() + ":" + std::to_string(number) + ": bad gold score");
    }
    if (t.gold < kMinScore || t.gold > kMaxScore) {
      throw InvalidScore(path.string() + ":" + std::to_string(number) + ": gold outside 0..5");
    }
    traps.push_back(std::move(t));
  }
  return traps;
}

std::string_view task_status_name(TaskStatus s) {
  switch (s) {
    case TaskStatus::Open: return "open";
    case TaskStatus::Judged: return "judged";
    case TaskStatus::Expired: return "expired";
  }
  return "open";
}

nlohmann::json WireTask::to_json() const {
  return {{"task_id", task_id}, {"domain_id", domain_id}, {"phrase", phrase},
          {"snapshot_url", snapshot_url}};
}

namespace {

std::int64_t system_millis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

// Fisher-Yates with plain modulo draws, so the order does not depend on the
// standard library's distribution implementation.
template <typename T>
void shuffle(std::vector<T>& v, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng() % i]);
  }
}

std::string task_id_for(int iteration, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "it%d-%04zu", iteration, index);
  return buf;
}

std::string snapshot_url(const std::string& domain_id) { return "/api/snapshots/" + domain_id; }

constexpr std::uint64_t kTrapSalt = 0x7261707354726170ULL;
constexpr std::uint64_t kOrderSalt = 0x6f72646572536565ULL;

}  // namespace

JudgeService::JudgeService(std::shared_ptr<const CorpusModel> corpus, std::vector<TrapSpec> traps,
                           ServiceConfig config, const std::filesystem::path& log_path,
                           Clock clock)
    : corpus_(std::move(corpus)), trap_pool_(std::move(traps)), config_(config),
      clock_(clock ? std::move(clock) : Clock(system_millis)), loop_(corpus_, config_.loop) {
  for (const auto& t : trap_pool_) {
    if (!corpus_->find(t.domain_id)) {
      throw UnknownDomain("trap refers to unknown domain '" + t.domain_id + "'");
    }
  }
  std::vector<nlohmann::json> history;
  if (!log_path.empty() && std::filesystem::exists(log_path)) history = EventLog::read(log_path);
  for (const auto& e : history) apply(e);
  log_ = EventLog(log_path);
}

void JudgeService::commit(const nlohmann::json& event) {
  log_.append(event);
  apply(event);
}

void JudgeService::apply(const nlohmann::json& event) {
  const std::string type = event.at("type").get<std::string>();
  if (type == "iteration_start") {
    apply_start(event);
  } else if (type == "judgment") {
    apply_judgment(event);
  } else if (type == "iteration_close") {
    apply_close(event);
  } else {
    throw Error("unknown event type '" + type + "'");
  }
}

// ---------------------------------------------------------------------------
// Iterations

int JudgeService::open_iteration(std::uint64_t seed, std::size_t m, double trap_rate) {
  std::unique_lock lock(mutex_);
  if (open_) throw IterationAlreadyOpen("iteration " + std::to_string(*open_) + " is open");
  if (m < 1) throw InvalidParams("m must be >= 1");
  if (!(trap_rate >= 0.0 && trap_rate <= 1.0)) throw InvalidParams("trap_rate must lie in [0, 1]");
  const int iteration = last_iteration_ + 1;
  commit({{"type", "iteration_start"},
          {"iteration", iteration},
          {"seed", seed},
          {"m", m},
          {"trap_rate", trap_rate}});
  return iteration;
}

void JudgeService::apply_start(const nlohmann::json& event) {
  const int iteration = event.at("iteration").get<int>();
  if (open_ || iteration != last_iteration_ + 1) throw Error("event log out of order at iteration_start");
  const auto seed = event.at("seed").get<std::uint64_t>();
  const auto m = event.at("m").get<std::size_t>();
  const double trap_rate = event.at("trap_rate").get<double>();

  std::vector<Task> tasks;
  for (const auto& p : loop_.plan_iteration(m, seed)) {
    const DomainModel* dm = corpus_->find(p.domain_id);
    if (!p.usable) {
      Task t;
      t.domain_id = p.domain_id;
      tasks.push_back(std::move(t));
      continue;
    }
    for (const auto& phrase : p.phrases) {
      Task t;
      t.domain_id = p.domain_id;
      t.phrase = phrase;
      t.display = dm->arms[static_cast<std::size_t>(dm->find_arm(phrase))].surface;
      tasks.push_back(std::move(t));
    }
  }

  std::size_t trap_count = 0;
  if (trap_rate > 0 && !trap_pool_.empty()) {
    const auto by_rate = static_cast<std::size_t>(std::ceil(trap_rate * static_cast<double>(tasks.size())));
    trap_count = std::min(trap_pool_.size(),
                          std::max(by_rate, static_cast<std::size_t>(config_.min_traps_per_iteration)));
  }
  std::vector<std::size_t> pool(trap_pool_.size());
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
  shuffle(pool, seed ^ kTrapSalt);
  for (std::size_t i = 0; i < trap_count; ++i) {
    const TrapSpec& spec = trap_pool_[pool[i]];
    Task t;
    t.domain_id = spec.domain_id;
    t.phrase = spec.phrase;
    t.display = spec.phrase;
    t.is_trap = true;
    t.trap_expected = spec.gold;
    tasks.push_back(std::move(t));
  }

  shuffle(tasks, seed);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    Task& t = tasks[i];
    t.task_id = task_id_for(iteration, i);
    t.iteration = iteration;
    t.snapshot_ref = snapshot_url(t.domain_id);
    task_index_[t.task_id] = {iteration, i};
  }
  tasks_[iteration] = std::move(tasks);
  last_iteration_ = iteration;
  open_ = iteration;
  open_seed_ = seed;
}

IterationReport JudgeService::close_iteration(int iteration) {
  std::unique_lock lock(mutex_);
  if (iteration < 1 || iteration > last_iteration_) {
    throw UnknownIteration("no iteration " + std::to_string(iteration));
  }
  if (open_ != iteration) throw NoOpenIteration("iteration " + std::to_string(iteration) + " is not open");
  commit({{"type", "iteration_close"}, {"iteration", iteration}});
  return reports_.at(iteration);
}

void JudgeService::apply_close(const nlohmann::json& event) {
  const int iteration = event.at("iteration").get<int>();
  if (open_ != iteration) throw Error("event log closes iteration that is not open");
  reports_[iteration] = loop_.close_iteration(iteration, judgments_);
  for (auto& t : tasks_[iteration]) {
    if (t.status == TaskStatus::Open) t.status = TaskStatus::Expired;
  }
  open_.reset();
}

// ---------------------------------------------------------------------------
// Tasks and judgments

bool JudgeService::is_flagged(const std::string& assessor_id) const {
  return flagged_.count(assessor_id) > 0;
}

std::vector<std::size_t> JudgeService::assessor_order(const std::string& assessor_id) const {
  std::vector<std::size_t> order(tasks_.at(*open_).size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle(order, domain_seed(open_seed_ ^ kOrderSalt, assessor_id));
  return order;
}

std::vector<WireTask> JudgeService::next_tasks(const std::string& assessor_id,
                                               std::size_t batch) const {
  std::shared_lock lock(mutex_);
  if (!open_) throw NoOpenIteration("no iteration is open");
  if (is_flagged(assessor_id)) throw AssessorFlagged("assessor " + assessor_id + " is flagged");
  const auto& tasks = tasks_.at(*open_);
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<WireTask> out;
  for (std::size_t i : assessor_order(assessor_id)) {
    if (out.size() >= batch) break;
    const Task& t = tasks[i];
    if (t.status != TaskStatus::Open) continue;
    if (judged_slots_.count({assessor_id, t.iteration, t.domain_id, t.display})) continue;
    if (!seen.insert({t.domain_id, t.display}).second) continue;
    out.push_back({t.task_id, t.domain_id, t.display, t.snapshot_ref});
  }
  return out;
}

SubmitResult JudgeService::submit_judgment(const std::string& assessor_id,
                                           const std::string& task_id, int score) {
  std::unique_lock lock(mutex_);
  if (score < kMinScore || score > kMaxScore) {
    throw InvalidScore("score " + std::to_string(score) + " outside 0..5");
  }
  if (assessor_id.empty()) throw InvalidParams("assessor_id is empty");
  const auto where = task_index_.find(task_id);
  if (where == task_index_.end()) throw UnknownTask("no task " + task_id);
  const Task& task = tasks_.at(where->second.first)[where->second.second];
  if (is_flagged(assessor_id)) throw AssessorFlagged("assessor " + assessor_id + " is flagged");
  const auto& done = judged_tasks_[assessor_id];
  if (std::find(done.begin(), done.end(), task_id) != done.end() ||
      judged_slots_.count({assessor_id, task.iteration, task.domain_id, task.display})) {
    throw DuplicateJudgment(assessor_id + " already judged " + task_id);
  }
  if (task.status != TaskStatus::Open) {
    throw TaskClosed("task " + task_id + " is " + std::string(task_status_name(task.status)));
  }

  Judgment j;
  j.task_id = task.task_id;
  j.iteration = task.iteration;
  j.domain_id = task.domain_id;
  j.phrase = task.phrase;
  j.assessor_id = assessor_id;
  j.score = score;
  j.is_trap = task.is_trap;
  j.trap_expected = task.trap_expected;
  j.submitted_at = clock_();
  commit(judgment_to_json(j));
  return {true, is_flagged(assessor_id)};
}

void JudgeService::apply_judgment(const nlohmann::json& event) {
  Judgment j = judgment_from_json(event);
  const auto where = task_index_.find(j.task_id);
  if (where == task_index_.end() || open_ != where->second.first) {
    throw Error("event log judges task " + j.task_id + " outside its open iteration");
  }
  Task& task = tasks_.at(where->second.first)[where->second.second];
  judged_tasks_[j.assessor_id].push_back(j.task_id);
  judged_slots_.insert({j.assessor_id, task.iteration, task.domain_id, task.display});
  tallies_[j.assessor_id].add(j);
  if (tallies_[j.assessor_id].flagged(config_.loop.trap_threshold, config_.loop.min_traps)) {
    flagged_.insert(j.assessor_id);
  }
  if (!is_flagged(j.assessor_id)) ++task.judgments;
  if (config_.judgments_per_task > 0 && task.judgments >= config_.judgments_per_task) {
    task.status = TaskStatus::Judged;
  }
  judgments_.push_back(std::move(j));
}

// ---------------------------------------------------------------------------
// Queries

IterationReport JudgeService::report(int iteration) const {
  std::shared_lock lock(mutex_);
  const auto it = reports_.find(iteration);
  if (it == reports_.end()) throw UnknownIteration("no report for iteration " + std::to_string(iteration));
  return it->second;
}

std::vector<IterationReport> JudgeService::reports() const {
  std::shared_lock lock(mutex_);
  std::vector<IterationReport> out;
  for (const auto& [_, r] : reports_) out.push_back(r);
  return out;
}

std::optional<int> JudgeService::current_iteration() const {
  std::shared_lock lock(mutex_);
  return open_;
}

AssessorSession JudgeService::session(const std::string& assessor_id) const {
  std::shared_lock lock(mutex_);
  AssessorSession s;
  s.assessor_id = assessor_id;
  if (const auto it = judged_tasks_.find(assessor_id); it != judged_tasks_.end()) {
    s.judged_tasks = it->second;
  }
  if (const auto it = tallies_.find(assessor_id); it != tallies_.end()) {
    s.traps_assigned = it->second.assigned;
    s.traps_triggered = it->second.triggered;
  }
  s.flagged = is_flagged(assessor_id);
  return s;
}

std::pair<std::string, std::string> JudgeService::snapshot(const std::string& domain_id) const {
  const DomainModel* dm = corpus_->find(domain_id);
  if (!dm) throw UnknownDomain("no domain " + domain_id);
  return {dm->record.html_source, dm->encoding.empty() ? "utf-8" : dm->encoding};
}

std::vector<Task> JudgeService::tasks(int iteration) const {
  std::shared_lock lock(mutex_);
  const auto it = tasks_.find(iteration);
  if (it == tasks_.end()) throw UnknownIteration("no iteration " + std::to_string(iteration));
  return it->second;
}

std::string JudgeService::state_dump() const {
  std::shared_lock lock(mutex_);
  std::string out = "last_iteration " + std::to_string(last_iteration_) + "\nopen " +
                    (open_ ? std::to_string(*open_) : std::string("-")) + "\n";
  out += loop_.snapshot();
  for (const auto& [iteration, tasks] : tasks_) {
    for (const auto& t : tasks) {
      out += "task " + t.task_id + " " + std::string(task_status_name(t.status)) + " " +
             std::to_string(t.judgments) + "\n";
    }
  }
  for (const auto& id : flagged_) out += "flagged " + id + "\n";
  for (const auto& [iteration, r] : reports_) out += "report " + r.to_json().dump() + "\n";
  return out;
}

std::string JudgeService::log_text() const {
  std::shared_lock lock(mutex_);
  return log_.text();
}

}  // namespace parkkw
