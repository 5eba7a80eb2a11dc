#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "parkkw/symmetric_eigen.hpp"

namespace parkkw {

// How the confidence width combines its two terms:
//   Additive: ||a|| * sqrt(ln(2TK/delta)) + ||v||
//   Scaled:   ||a|| * (sqrt(ln(2TK/delta)) + ||v||)
enum class SigmaGrouping { Additive, Scaled };

std::string_view sigma_grouping_name(SigmaGrouping g);
SigmaGrouping parse_sigma_grouping(std::string_view name);

// Selection history of one bandit: the D x t matrix of pulled feature vectors
// and the t rewards they earned.
class BanditState {
 public:
  static constexpr double kRidge = 1e-6;

  BanditState(int dim, int horizon, double delta);

  int dim() const { return static_cast<int>(history_.rows()); }
  int pulls() const { return static_cast<int>(history_.cols()); }
  int horizon() const { return horizon_; }
  double delta() const { return delta_; }
  int arm_count() const { return arm_count_; }
  void set_arm_count(int k) { arm_count_ = k; }

  const Eigen::MatrixXd& history() const { return history_; }
  const Eigen::VectorXd& rewards() const { return rewards_; }
  // Ridge estimate (XX' + 1e-6 I)^-1 X R of the linear reward weights. Only
  // used for reporting.
  const Eigen::VectorXd& weight_estimate() const { return w_hat_; }

  // Appends one pull. Throws HorizonExhausted once t == T, RewardOutOfRange
  // for rewards outside [0, 1].
  void update(const Eigen::VectorXd& features, double reward);

  // `linrel v1 D=.. t=.. T=.. K=.. delta=..` then one line per pull.
  std::string serialize() const;
  static BanditState parse(std::string_view text);

  friend bool operator==(const BanditState& a, const BanditState& b);

 private:
  Eigen::MatrixXd history_;
  Eigen::VectorXd rewards_;
  Eigen::VectorXd w_hat_;
  int horizon_;
  double delta_;
  int arm_count_ = 1;
};

// X X' = U' diag(lambdas) U with lambdas descending; U rows orthonormal.
struct HistoryEigen {
  Eigen::MatrixXd U;
  Eigen::VectorXd lambdas;
};

HistoryEigen eigendecompose_history(const BanditState& state);

struct Coefficients {
  Eigen::VectorXd a;  // length t
  double v_norm = 0.0;
};

// Splits U x at eigenvalue 1: coordinates with lambda >= 1 are reproduced by
// a linear combination `a` of past pulls; the rest form the residual v.
Coefficients compute_coefficients(const BanditState& state, const HistoryEigen& eig,
                                  const Eigen::VectorXd& x);

struct UcbScore {
  std::size_t arm_index = 0;
  double estimate = 0.0;  // R . a
  double width = 0.0;
  double ucb = 0.0;  // estimate + width
  double a_norm = 0.0;
  double v_norm = 0.0;
};

// Precomputes everything about the history that scoring needs, so scoring K
// arms costs one eigendecomposition.
class LinRelScorer {
 public:
  explicit LinRelScorer(const BanditState& state,
                        SigmaGrouping grouping = SigmaGrouping::Additive);

  Coefficients coefficients(const Eigen::VectorXd& x) const;
  // Throws InvalidHorizon when 2TK/delta <= 1.
  std::vector<UcbScore> score(std::span<const Eigen::VectorXd> arms) const;

  const HistoryEigen& eigen() const { return eig_; }
  int retained() const { return k_; }

 private:
  const BanditState& state_;
  SigmaGrouping grouping_;
  HistoryEigen eig_;
  int k_ = 0;
  // diag(1/lambda_1..k) * U_k * X, k x t.
  Eigen::MatrixXd projection_;
};

// Width term ln(2TK/delta); throws InvalidHorizon when the argument is <= 1.
double confidence_log_term(int horizon, std::size_t arms, double delta);

std::vector<UcbScore> ucb_scores(const BanditState& state, std::span<const Eigen::VectorXd> arms,
                                 SigmaGrouping grouping = SigmaGrouping::Additive);

// Chooses min(m, K) distinct arms. While the history holds fewer than D pulls
// (counting arms chosen earlier in this call) a slot goes to the arm whose
// component orthogonal to the pulled span is largest, seeded-random among
// ties. Remaining slots take the highest UCB, ties by estimate then index.
std::vector<std::size_t> select_arms(const BanditState& state,
                                     std::span<const Eigen::VectorXd> arms, std::size_t m,
                                     std::uint64_t seed,
                                     SigmaGrouping grouping = SigmaGrouping::Additive);

}  // namespace parkkw
