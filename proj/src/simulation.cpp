#include "parkkw/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "parkkw/features.hpp"

namespace parkkw {

double SyntheticRun::linrel_total() const {
  return std::accumulate(linrel_rewards.begin(), linrel_rewards.end(), 0.0);
}

double SyntheticRun::random_total() const {
  return std::accumulate(random_rewards.begin(), random_rewards.end(), 0.0);
}

double SyntheticRun::linrel_mean(std::size_t begin, std::size_t end) const {
  end = std::min(end, linrel_rewards.size());
  if (begin >= end) return 0.0;
  return std::accumulate(linrel_rewards.begin() + static_cast<long>(begin),
                         linrel_rewards.begin() + static_cast<long>(end), 0.0) /
         static_cast<double>(end - begin);
}

SyntheticRun run_synthetic(std::uint64_t seed, const SyntheticConfig& config) {
  std::mt19937_64 env_rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SyntheticRun run;
  run.w_star = simplex_weights(config.dim, env_rng);

  std::vector<Eigen::VectorXd> arms;
  std::vector<double> expected;
  for (int k = 0; k < config.arms; ++k) {
    Eigen::VectorXd x(config.dim);
    for (int i = 0; i < config.dim; ++i) x(i) = unit(env_rng);
    expected.push_back(x.dot(run.w_star));
    arms.push_back(std::move(x));
  }
  run.best_expected = *std::max_element(expected.begin(), expected.end());

  std::normal_distribution<double> noise(0.0, config.noise);
  const auto reward = [&](std::size_t arm, std::mt19937_64& rng) {
    return std::clamp(expected[arm] + noise(rng), 0.0, 1.0);
  };

  std::mt19937_64 linrel_rng(seed ^ 0x5bd1e995ULL);
  BanditState state(config.dim, config.horizon, config.delta);
  state.set_arm_count(config.arms);
  for (int t = 0; t < config.horizon; ++t) {
    const std::size_t arm =
        select_arms(state, arms, 1, seed + static_cast<std::uint64_t>(t), config.grouping).front();
    const double r = reward(arm, linrel_rng);
    state.update(arms[arm], r);
    run.linrel_rewards.push_back(r);
  }
  run.w_hat = state.weight_estimate();

  std::mt19937_64 random_rng(seed ^ 0xc2b2ae35ULL);
  std::uniform_int_distribution<std::size_t> pick(0, arms.size() - 1);
  for (int t = 0; t < config.horizon; ++t) {
    run.random_rewards.push_back(reward(pick(random_rng), random_rng));
  }
  return run;
}

Eigen::VectorXd simplex_weights(int dim, std::mt19937_64& rng) {
  std::exponential_distribution<double> exp1(1.0);
  Eigen::VectorXd w(dim);
  for (int i = 0; i < dim; ++i) w(i) = exp1(rng);
  return w / w.sum();
}

int simulated_score(const Eigen::VectorXd& features, const Eigen::VectorXd& w_true, int noise) {
  const int base = static_cast<int>(std::lround(kMaxScore * features.dot(w_true)));
  return std::clamp(base + noise, kMinScore, kMaxScore);
}

std::vector<IterationReport> run_simulated_assessors(std::shared_ptr<const CorpusModel> corpus,
                                                     const AssessorSimConfig& config,
                                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::VectorXd w_true =
      config.w_true.size() == kFeatureDim ? config.w_true : simplex_weights(kFeatureDim, rng);
  FeedbackLoop loop(corpus, config.loop);
  std::uniform_int_distribution<int> noise(-1, 1);
  std::vector<Judgment> judgments;
  std::vector<IterationReport> reports;
  for (int it = 1; it <= config.iterations; ++it) {
    const auto plan = loop.plan_iteration(config.m, rng());
    int task = 0;
    for (const auto& p : plan) {
      const DomainModel* dm = corpus->find(p.domain_id);
      std::vector<std::string> phrases = p.phrases;
      if (!p.usable) phrases.assign(1, "");
      for (const auto& phrase : phrases) {
        const long arm = p.usable ? dm->find_arm(phrase) : -1;
        const std::string task_id = "it" + std::to_string(it) + "-" + std::to_string(task++);
        for (int a = 0; a < config.assessors; ++a) {
          Judgment j;
          j.task_id = task_id;
          j.iteration = it;
          j.domain_id = p.domain_id;
          j.phrase = phrase;
          j.assessor_id = "sim" + std::to_string(a);
          j.score = arm < 0 ? 0
                            : simulated_score(dm->arms[static_cast<std::size_t>(arm)].features,
                                              w_true, noise(rng));
          judgments.push_back(std::move(j));
        }
      }
    }
    reports.push_back(loop.close_iteration(it, judgments));
  }
  return reports;
}

}  // namespace parkkw
