#include "parkkw/agreement.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "parkkw/errors.hpp"

namespace parkkw {

namespace {

void check_category(int score, int categories) {
  if (score < 0 || score >= categories) {
    throw InvalidScore("score " + std::to_string(score) + " outside 0.." +
                       std::to_string(categories - 1));
  }
}

std::map<std::string, int> first_ratings(const std::vector<ItemRating>& ratings, int categories) {
  std::map<std::string, int> out;
  for (const auto& [item, score] : ratings) {
    check_category(score, categories);
    out.emplace(item, score);
  }
  return out;
}

}  // namespace

double cohen_kappa(const std::vector<ItemRating>& a, const std::vector<ItemRating>& b,
                   int categories) {
  const auto ra = first_ratings(a, categories);
  const auto rb = first_ratings(b, categories);
  std::vector<double> ma(static_cast<std::size_t>(categories), 0.0);
  std::vector<double> mb(ma.size(), 0.0);
  int common = 0;
  int agree = 0;
  for (const auto& [item, sa] : ra) {
    const auto it = rb.find(item);
    if (it == rb.end()) continue;
    ++common;
    agree += sa == it->second;
    ma[static_cast<std::size_t>(sa)] += 1;
    mb[static_cast<std::size_t>(it->second)] += 1;
  }
  if (common < 2) {
    throw NotEnoughOverlap(std::to_string(common) + " common items, need 2");
  }
  const double n = common;
  const double p_o = agree / n;
  double p_e = 0;
  for (std::size_t c = 0; c < ma.size(); ++c) p_e += (ma[c] / n) * (mb[c] / n);
  if (p_e >= 1.0) {
    if (p_o == 1.0) return 1.0;
    throw DegenerateMarginals("chance agreement is 1");
  }
  return (p_o - p_e) / (1.0 - p_e);
}

double fleiss_kappa(const std::vector<std::vector<int>>& counts, int raters_per_item) {
  if (raters_per_item < 2) throw UnequalRaterCounts("need at least 2 raters per item");
  if (counts.empty()) throw NotEnoughOverlap("no items");
  const std::size_t categories = counts.front().size();
  const double n = raters_per_item;
  std::vector<double> totals(categories, 0.0);
  double p_bar = 0;
  for (const auto& row : counts) {
    if (row.size() != categories) throw UnequalRaterCounts("rows have different category counts");
    int sum = 0;
    double sq = 0;
    for (std::size_t c = 0; c < categories; ++c) {
      if (row[c] < 0) throw UnequalRaterCounts("negative count");
      sum += row[c];
      sq += static_cast<double>(row[c]) * row[c];
      totals[c] += row[c];
    }
    if (sum != raters_per_item) {
      throw UnequalRaterCounts("item has " + std::to_string(sum) + " raters, expected " +
                               std::to_string(raters_per_item));
    }
    p_bar += (sq - n) / (n * (n - 1));
  }
  const double items = static_cast<double>(counts.size());
  p_bar /= items;
  double p_e = 0;
  for (double t : totals) {
    const double p = t / (items * n);
    p_e += p * p;
  }
  if (p_e >= 1.0) throw DegenerateMarginals("every rating falls in one category");
  return (p_bar - p_e) / (1.0 - p_e);
}

AgreementStats iteration_agreement(const std::vector<Judgment>& judgments) {
  using Item = std::pair<std::string, std::string>;
  // item -> assessor -> score, first judgment wins
  std::map<Item, std::map<std::string, int>> by_item;
  std::map<std::string, std::vector<ItemRating>> by_assessor;
  for (const auto& j : judgments) {
    if (j.is_trap) continue;
    const Item item{j.domain_id, j.phrase};
    if (!by_item[item].emplace(j.assessor_id, j.score).second) continue;
    by_assessor[j.assessor_id].emplace_back(j.domain_id + '\x1f' + j.phrase, j.score);
  }

  AgreementStats stats;
  stats.n_items = static_cast<int>(by_item.size());

  double sum = 0;
  for (auto a = by_assessor.begin(); a != by_assessor.end(); ++a) {
    for (auto b = std::next(a); b != by_assessor.end(); ++b) {
      try {
        sum += cohen_kappa(a->second, b->second);
        ++stats.cohen_pairs;
      } catch (const NotEnoughOverlap&) {
      } catch (const DegenerateMarginals&) {
      }
    }
  }
  if (stats.cohen_pairs > 0) stats.cohen_mean = sum / stats.cohen_pairs;

  std::size_t raters = 0;
  for (const auto& [_, scores] : by_item) {
    if (scores.size() >= 2) raters = raters == 0 ? scores.size() : std::min(raters, scores.size());
  }
  if (raters >= 2) {
    std::vector<std::vector<int>> counts;
    for (const auto& [_, scores] : by_item) {
      if (scores.size() < 2) continue;
      std::vector<int> row(kScoreCategories, 0);
      std::size_t taken = 0;
      for (const auto& [assessor, score] : scores) {  // map: ascending assessor id
        if (taken++ == raters) break;
        row[static_cast<std::size_t>(score)] += 1;
      }
      counts.push_back(std::move(row));
    }
    try {
      stats.fleiss = fleiss_kappa(counts, static_cast<int>(raters));
      stats.fleiss_raters = static_cast<int>(raters);
      stats.fleiss_items = static_cast<int>(counts.size());
    } catch (const DegenerateMarginals&) {
    }
  }
  return stats;
}

std::string_view kappa_label(double kappa) {
  if (kappa < 0.0) return "poor";
  if (kappa < 0.2) return "slight";
  if (kappa < 0.4) return "fair";
  if (kappa < 0.6) return "moderate";
  if (kappa < 0.8) return "substantial";
  return "almost perfect";
}

}  // namespace parkkw
