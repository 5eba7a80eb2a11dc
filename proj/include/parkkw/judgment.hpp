#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace parkkw {

inline constexpr int kMinScore = 0;
inline constexpr int kMaxScore = 5;

// One assessor's 0-5 relevance score for a (domain, phrase) slot. Score 0 is
// reserved for broken pages and empty keywords.
struct Judgment {
  std::string task_id;
  std::string domain_id;
  std::string phrase;
  std::string assessor_id;
  int score = 0;
  bool is_trap = false;
  std::optional<int> trap_expected;
  std::int64_t submitted_at = 0;  // unix milliseconds
  int iteration = 0;
};

// A trap fires when the score is 2 or more points away from its gold score.
inline bool trap_triggered(const Judgment& j) {
  if (!j.is_trap || !j.trap_expected) return false;
  const int d = j.score - *j.trap_expected;
  return d >= 2 || d <= -2;
}

}  // namespace parkkw
