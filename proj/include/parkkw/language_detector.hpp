#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace parkkw {

struct LanguageGuess {
  std::string code;  // ISO-639-1
  double confidence = 0.0;
};

// Naive Bayes over character 3-grams of space-padded words. Profiles are
// `<code>.tsv` files of `gram<TAB>count` lines.
class LanguageDetector {
 public:
  static constexpr std::size_t kMinLetters = 20;

  static LanguageDetector load(const std::filesystem::path& profile_dir);

  // Throws Undetectable when `text` has fewer than kMinLetters letters.
  LanguageGuess detect(std::string_view text) const;

  std::vector<std::string> languages() const { return codes_; }

 private:
  std::vector<std::string> codes_;
  // gram -> per-language log probability, indexed like codes_.
  std::unordered_map<std::string, std::vector<double>> log_prob_;
};

}  // namespace parkkw
