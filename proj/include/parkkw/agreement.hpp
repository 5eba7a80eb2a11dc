#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parkkw/judgment.hpp"

namespace parkkw {

inline constexpr int kScoreCategories = kMaxScore - kMinScore + 1;

using ItemRating = std::pair<std::string, int>;

// Cohen's kappa over the items both raters scored. Needs at least 2 common
// items (NotEnoughOverlap). When chance agreement is total (both raters
// constant on the same category) the result is 1 by convention.
double cohen_kappa(const std::vector<ItemRating>& a, const std::vector<ItemRating>& b,
                   int categories = kScoreCategories);

// counts[i][c] = raters putting item i in category c. Every row must sum to
// raters_per_item (UnequalRaterCounts); DegenerateMarginals when all ratings
// fall in a single category.
double fleiss_kappa(const std::vector<std::vector<int>>& counts, int raters_per_item);

struct AgreementStats {
  std::optional<double> cohen_mean;
  int cohen_pairs = 0;
  std::optional<double> fleiss;
  int fleiss_raters = 0;  // raters per item after subsampling
  int fleiss_items = 0;
  int n_items = 0;
  int n_categories = kScoreCategories;
};

// Items are (domain_id, phrase) slots. Callers drop traps and flagged
// assessors first. Fleiss uses items with at least two raters, each cut down
// to the smallest rater count by keeping the lowest assessor ids.
AgreementStats iteration_agreement(const std::vector<Judgment>& judgments);

// poor < 0 <= slight < 0.2 <= fair < 0.4 <= moderate < 0.6 <= substantial
// < 0.8 <= almost perfect
std::string_view kappa_label(double kappa);

}  // namespace parkkw
