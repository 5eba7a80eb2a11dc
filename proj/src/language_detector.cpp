#include "parkkw/language_detector.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "parkkw/errors.hpp"
#include "parkkw/utf8.hpp"

namespace parkkw {

namespace {

// Interpolation weight toward the uniform distribution over known grams.
constexpr double kSmoothing = 0.01;

std::vector<std::string> trigrams(std::string_view text) {
  std::vector<std::string> grams;
  std::u32string word;
  const auto flush = [&] {
    if (word.empty()) return;
    std::u32string padded = U" " + word + U" ";
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
      grams.push_back(utf8::encode(std::u32string_view(padded).substr(i, 3)));
    }
    word.clear();
  };
  for (char32_t cp : utf8::decode(text)) {
    if (utf8::is_letter(cp)) {
      word.push_back(utf8::to_lower(cp));
    } else {
      flush();
    }
  }
  flush();
  return grams;
}

}  // namespace

LanguageDetector LanguageDetector::load(const std::filesystem::path& profile_dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(profile_dir)) {
    if (entry.path().extension() == ".tsv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error("no language profiles in " + profile_dir.string());

  std::vector<std::unordered_map<std::string, double>> counts;
  LanguageDetector detector;
  for (const auto& file : files) {
    std::ifstream in(file);
    std::unordered_map<std::string, double> c;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      c[line.substr(0, tab)] += std::stod(line.substr(tab + 1));
    }
    detector.codes_.push_back(file.stem().string());
    counts.push_back(std::move(c));
  }

  std::unordered_map<std::string, bool> vocabulary;
  for (const auto& c : counts) {
    for (const auto& [gram, _] : c) vocabulary[gram] = true;
  }
  const double uniform = 1.0 / static_cast<double>(vocabulary.size());
  std::vector<double> totals;
  for (const auto& c : counts) {
    double t = 0;
    for (const auto& [_, n] : c) t += n;
    totals.push_back(t);
  }
  for (const auto& [gram, _] : vocabulary) {
    std::vector<double> lp(counts.size());
    for (std::size_t l = 0; l < counts.size(); ++l) {
      const auto it = counts[l].find(gram);
      const double p = it == counts[l].end() ? 0.0 : it->second / totals[l];
      lp[l] = std::log((1.0 - kSmoothing) * p + kSmoothing * uniform);
    }
    detector.log_prob_.emplace(gram, std::move(lp));
  }
  return detector;
}

LanguageGuess LanguageDetector::detect(std::string_view text) const {
  std::size_t letters = 0;
  for (char32_t cp : utf8::decode(text)) {
    if (utf8::is_letter(cp)) ++letters;
  }
  if (letters < kMinLetters) {
    throw Undetectable("text has " + std::to_string(letters) + " letters, need " +
                       std::to_string(kMinLetters));
  }

  std::vector<double> score(codes_.size(), 0.0);
  std::size_t used = 0;
  for (const auto& gram : trigrams(text)) {
    const auto it = log_prob_.find(gram);
    if (it == log_prob_.end()) continue;
    ++used;
    for (std::size_t l = 0; l < score.size(); ++l) score[l] += it->second[l];
  }
  if (used == 0) throw Undetectable("no known character n-grams in text");

  // Posterior under a uniform prior, normalized in log space.
  const double max = *std::max_element(score.begin(), score.end());
  double norm = 0;
  for (double s : score) norm += std::exp(s - max);
  std::size_t best = 0;
  for (std::size_t l = 1; l < score.size(); ++l) {
    if (score[l] > score[best]) best = l;
  }
  return {codes_[best], std::exp(score[best] - max) / norm};
}

}  // namespace parkkw
