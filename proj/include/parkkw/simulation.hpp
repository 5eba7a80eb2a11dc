#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "parkkw/feedback_loop.hpp"
#include "parkkw/linrel.hpp"

namespace parkkw {

// Normalized Exp(1) draws: a point uniform on the probability simplex.
Eigen::VectorXd simplex_weights(int dim, std::mt19937_64& rng);

// Fixed arms with features uniform in [0,1]^D, positive weights w* summing to
// 1, reward x.w* + N(0, noise) clipped to [0, 1].
struct SyntheticConfig {
  int dim = 8;
  int arms = 20;
  int horizon = 500;
  double noise = 0.1;
  double delta = 0.05;
  SigmaGrouping grouping = SigmaGrouping::Additive;
};

struct SyntheticRun {
  std::vector<double> linrel_rewards;
  std::vector<double> random_rewards;
  double best_expected = 0.0;  // max_i x_i.w*
  Eigen::VectorXd w_star;
  Eigen::VectorXd w_hat;

  double linrel_total() const;
  double random_total() const;
  // Mean LinRel reward over pulls [begin, end).
  double linrel_mean(std::size_t begin, std::size_t end) const;
};

SyntheticRun run_synthetic(std::uint64_t seed, const SyntheticConfig& config = {});

// Simulated assessors score round(5 x.w_true) plus uniform noise in
// {-1, 0, +1}, clamped to 0..5. Unusable domains get 0. Without an explicit
// w_true each run draws one from the simplex using its seed.
struct AssessorSimConfig {
  int iterations = 6;
  int assessors = 5;
  std::size_t m = 3;
  LoopConfig loop;
  Eigen::VectorXd w_true;
};

int simulated_score(const Eigen::VectorXd& features, const Eigen::VectorXd& w_true, int noise);

std::vector<IterationReport> run_simulated_assessors(std::shared_ptr<const CorpusModel> corpus,
                                                     const AssessorSimConfig& config,
                                                     std::uint64_t seed);

}  // namespace parkkw
