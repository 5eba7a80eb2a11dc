#include "parkkw/linrel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include "parkkw/errors.hpp"

namespace parkkw {

std::string_view sigma_grouping_name(SigmaGrouping g) {
  return g == SigmaGrouping::Additive ? "additive" : "scaled";
}

SigmaGrouping parse_sigma_grouping(std::string_view name) {
  if (name == "additive") return SigmaGrouping::Additive;
  if (name == "scaled") return SigmaGrouping::Scaled;
  throw Error("unknown sigma grouping '" + std::string(name) + "' (additive|scaled)");
}

// ---------------------------------------------------------------------------
// BanditState

BanditState::BanditState(int dim, int horizon, double delta)
    : history_(dim, 0), rewards_(0), w_hat_(Eigen::VectorXd::Zero(dim)), horizon_(horizon),
      delta_(delta) {
  if (dim < 1) throw Error("bandit dimension must be >= 1");
  if (horizon < 1) throw Error("horizon T must be >= 1");
  if (!(delta > 0 && delta < 1)) throw Error("delta must lie in (0, 1)");
}

void BanditState::update(const Eigen::VectorXd& features, double reward) {
  if (pulls() >= horizon_) {
    throw HorizonExhausted("horizon of " + std::to_string(horizon_) + " pulls exhausted");
  }
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw RewardOutOfRange("reward " + std::to_string(reward) + " outside [0, 1]");
  }
  if (features.size() != dim()) throw Error("feature vector has wrong dimension");
  const Eigen::Index t = history_.cols();
  history_.conservativeResize(Eigen::NoChange, t + 1);
  history_.col(t) = features;
  rewards_.conservativeResize(t + 1);
  rewards_(t) = reward;

  const Eigen::MatrixXd gram =
      history_ * history_.transpose() + kRidge * Eigen::MatrixXd::Identity(dim(), dim());
  w_hat_ = gram.ldlt().solve(history_ * rewards_);
}

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

double read_double(std::string_view s) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("bad number '" + std::string(s) + "' in bandit snapshot");
  }
  return v;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ') ++i;
    if (i > start) parts.push_back(line.substr(start, i - start));
  }
  return parts;
}

}  // namespace

std::string BanditState::serialize() const {
  std::string out = "linrel v1 D=" + std::to_string(dim()) + " t=" + std::to_string(pulls()) +
                    " T=" + std::to_string(horizon_) + " K=" + std::to_string(arm_count_) +
                    " delta=";
  append_double(out, delta_);
  out.push_back('\n');
  for (Eigen::Index c = 0; c < history_.cols(); ++c) {
    for (Eigen::Index r = 0; r < history_.rows(); ++r) {
      append_double(out, history_(r, c));
      out.push_back(' ');
    }
    append_double(out, rewards_(c));
    out.push_back('\n');
  }
  return out;
}

BanditState BanditState::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string header;
  std::getline(in, header);
  const auto parts = split_ws(header);
  if (parts.size() != 7 || parts[0] != "linrel" || parts[1] != "v1") {
    throw Error("not a linrel v1 snapshot");
  }
  const auto field = [&](std::size_t i, std::string_view key) {
    if (parts[i].substr(0, key.size()) != key) throw Error("snapshot header missing " + std::string(key));
    return parts[i].substr(key.size());
  };
  const int dim = static_cast<int>(read_double(field(2, "D=")));
  const int t = static_cast<int>(read_double(field(3, "t=")));
  const int horizon = static_cast<int>(read_double(field(4, "T=")));
  const int k = static_cast<int>(read_double(field(5, "K=")));
  const double delta = read_double(field(6, "delta="));

  BanditState state(dim, horizon, delta);
  state.set_arm_count(k);
  std::string line;
  for (int row = 0; row < t; ++row) {
    if (!std::getline(in, line)) throw Error("snapshot truncated");
    const auto values = split_ws(line);
    if (values.size() != static_cast<std::size_t>(dim) + 1) throw Error("snapshot row has wrong width");
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x(i) = read_double(values[static_cast<std::size_t>(i)]);
    state.update(x, read_double(values.back()));
  }
  return state;
}

bool operator==(const BanditState& a, const BanditState& b) {
  return a.horizon_ == b.horizon_ && a.delta_ == b.delta_ && a.arm_count_ == b.arm_count_ &&
         a.history_.rows() == b.history_.rows() && a.history_.cols() == b.history_.cols() &&
         a.history_ == b.history_ && a.rewards_ == b.rewards_;
}

// ---------------------------------------------------------------------------
// Scoring

HistoryEigen eigendecompose_history(const BanditState& state) {
  const Eigen::MatrixXd& x = state.history();
  const Eigen::MatrixXd gram = x * x.transpose();
  SymmetricEigen eig = jacobi_eigen(gram);
  return {std::move(eig.vectors), std::move(eig.values)};
}

namespace {

// Eigenvalues that are 1 up to rounding count as 1, so a unit vector pulled
// once stays on the retained side.
constexpr double kSplitTolerance = 1e-9;

int count_retained(const Eigen::VectorXd& lambdas) {
  int k = 0;
  while (k < lambdas.size() && lambdas(k) >= 1.0 - kSplitTolerance) ++k;
  return k;
}

Eigen::MatrixXd make_projection(const BanditState& state, const HistoryEigen& eig, int k) {
  Eigen::MatrixXd p = eig.U.topRows(k) * state.history();
  for (int j = 0; j < k; ++j) p.row(j) /= eig.lambdas(j);
  return p;
}

Coefficients coefficients_from(const HistoryEigen& eig, int k, const Eigen::MatrixXd& projection,
                               const Eigen::VectorXd& x) {
  const Eigen::VectorXd z = eig.U * x;
  Coefficients c;
  c.a = projection.transpose() * z.head(k);
  c.v_norm = z.tail(z.size() - k).norm();
  return c;
}

}  // namespace

Coefficients compute_coefficients(const BanditState& state, const HistoryEigen& eig,
                                  const Eigen::VectorXd& x) {
  const int k = count_retained(eig.lambdas);
  return coefficients_from(eig, k, make_projection(state, eig, k), x);
}

double confidence_log_term(int horizon, std::size_t arms, double delta) {
  const double arg = 2.0 * horizon * static_cast<double>(arms) / delta;
  if (!(arg > 1.0)) {
    throw InvalidHorizon("ln(2TK/delta) is not positive for T=" + std::to_string(horizon) +
                         " K=" + std::to_string(arms));
  }
  return std::log(arg);
}

LinRelScorer::LinRelScorer(const BanditState& state, SigmaGrouping grouping)
    : state_(state), grouping_(grouping), eig_(eigendecompose_history(state)),
      k_(count_retained(eig_.lambdas)), projection_(make_projection(state, eig_, k_)) {}

Coefficients LinRelScorer::coefficients(const Eigen::VectorXd& x) const {
  return coefficients_from(eig_, k_, projection_, x);
}

std::vector<UcbScore> LinRelScorer::score(std::span<const Eigen::VectorXd> arms) const {
  const double root = std::sqrt(confidence_log_term(state_.horizon(), arms.size(), state_.delta()));
  std::vector<UcbScore> scores;
  scores.reserve(arms.size());
  for (std::size_t i = 0; i < arms.size(); ++i) {
    const Coefficients c = coefficients(arms[i]);
    UcbScore s;
    s.arm_index = i;
    s.estimate = state_.rewards().dot(c.a);
    s.a_norm = c.a.norm();
    s.v_norm = c.v_norm;
    s.width = grouping_ == SigmaGrouping::Additive ? s.a_norm * root + s.v_norm
                                                   : s.a_norm * (root + s.v_norm);
    s.ucb = s.estimate + s.width;
    scores.push_back(s);
  }
  return scores;
}

std::vector<UcbScore> ucb_scores(const BanditState& state, std::span<const Eigen::VectorXd> arms,
                                 SigmaGrouping grouping) {
  return LinRelScorer(state, grouping).score(arms);
}

// ---------------------------------------------------------------------------
// Selection

namespace {

// Orthonormal basis of the span of a set of vectors, grown by Gram-Schmidt.
class SpanBasis {
 public:
  explicit SpanBasis(int dim) : dim_(dim) {}

  Eigen::VectorXd residual(const Eigen::VectorXd& x) const {
    Eigen::VectorXd r = x;
    // Two passes keep the residual orthogonal in floating point.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis_) r -= b.dot(r) * b;
    }
    return r;
  }

  void add(const Eigen::VectorXd& x) {
    if (static_cast<int>(basis_.size()) >= dim_) return;
    const Eigen::VectorXd r = residual(x);
    const double n = r.norm();
    if (n > 1e-10 * std::max(1.0, x.norm())) basis_.push_back(r / n);
  }

 private:
  int dim_;
  std::vector<Eigen::VectorXd> basis_;
};

}  // namespace

std::vector<std::size_t> select_arms(const BanditState& state,
                                     std::span<const Eigen::VectorXd> arms, std::size_t m,
                                     std::uint64_t seed, SigmaGrouping grouping) {
  const std::size_t n = std::min(m, arms.size());
  std::vector<std::size_t> chosen;
  if (n == 0) return chosen;
  std::vector<bool> taken(arms.size(), false);
  std::mt19937_64 rng(seed);

  SpanBasis span(state.dim());
  for (Eigen::Index c = 0; c < state.history().cols(); ++c) span.add(state.history().col(c));

  std::vector<UcbScore> ranked;
  for (std::size_t slot = 0; slot < n; ++slot) {
    if (state.pulls() + static_cast<int>(slot) < state.dim()) {
      double best = -1.0;
      std::vector<std::size_t> ties;
      for (std::size_t i = 0; i < arms.size(); ++i) {
        if (taken[i]) continue;
        const double r = span.residual(arms[i]).norm();
        const double tol = 1e-12 * std::max(1.0, std::max(best, r));
        if (r > best + tol) {
          best = r;
          ties.assign(1, i);
        } else if (std::abs(r - best) <= tol) {
          ties.push_back(i);
        }
      }
      std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
      const std::size_t winner = ties[pick(rng)];
      taken[winner] = true;
      chosen.push_back(winner);
      span.add(arms[winner]);
      continue;
    }
    if (ranked.empty()) {
      ranked = ucb_scores(state, arms, grouping);
      std::stable_sort(ranked.begin(), ranked.end(), [](const UcbScore& a, const UcbScore& b) {
        if (a.ucb != b.ucb) return a.ucb > b.ucb;
        if (a.estimate != b.estimate) return a.estimate > b.estimate;
        return a.arm_index < b.arm_index;
      });
    }
    for (const auto& s : ranked) {
      if (!taken[s.arm_index]) {
        taken[s.arm_index] = true;
        chosen.push_back(s.arm_index);
        break;
      }
    }
  }
  return chosen;
}

}  // namespace parkkw
