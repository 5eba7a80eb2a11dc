#include "parkkw/porter_stemmer.hpp"

#include <initializer_list>
#include <utility>

namespace parkkw {

namespace {

// Mutable view over the word being stemmed. Consonant/measure definitions
// follow Porter's paper: 'y' is a vowel only when it follows a consonant.
class Word {
 public:
  explicit Word(std::string_view w) : s_(w) {}

  const std::string& str() const { return s_; }

  bool ends_with(std::string_view suffix) const {
    return s_.size() >= suffix.size() &&
           std::string_view(s_).substr(s_.size() - suffix.size()) == suffix;
  }

  // Measure of the first `len` characters.
  int measure(std::size_t len) const {
    int m = 0;
    std::size_t i = 0;
    while (i < len && consonant(i)) ++i;
    while (i < len) {
      while (i < len && !consonant(i)) ++i;
      if (i >= len) break;
      while (i < len && consonant(i)) ++i;
      ++m;
    }
    return m;
  }

  bool has_vowel(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i) {
      if (!consonant(i)) return true;
    }
    return false;
  }

  bool double_consonant(std::size_t len) const {
    return len >= 2 && s_[len - 1] == s_[len - 2] && consonant(len - 1);
  }

  // *o: stem ends consonant-vowel-consonant, final consonant not w, x or y.
  bool cvc(std::size_t len) const {
    if (len < 3) return false;
    if (!consonant(len - 1) || consonant(len - 2) || !consonant(len - 3)) return false;
    const char c = s_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  void replace_suffix(std::size_t suffix_len, std::string_view with) {
    s_.resize(s_.size() - suffix_len);
    s_.append(with);
  }

  char back() const { return s_.back(); }
  std::size_t size() const { return s_.size(); }

 private:
  bool consonant(std::size_t i) const {
    switch (s_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u': return false;
      case 'y': return i == 0 || !consonant(i - 1);
      default: return true;
    }
  }

  std::string s_;
};

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

// Applies the rule with the longest matching suffix if the remaining stem has
// measure > min_measure. Only that rule is considered.
void apply_longest(Word& w, std::initializer_list<Rule> rules, int min_measure) {
  const Rule* best = nullptr;
  for (const Rule& r : rules) {
    if (w.ends_with(r.suffix) && (!best || r.suffix.size() > best->suffix.size())) best = &r;
  }
  if (!best) return;
  const std::size_t stem_len = w.size() - best->suffix.size();
  if (w.measure(stem_len) > min_measure) w.replace_suffix(best->suffix.size(), best->replacement);
}

void step1a(Word& w) {
  if (w.ends_with("sses")) w.replace_suffix(4, "ss");
  else if (w.ends_with("ies")) w.replace_suffix(3, "i");
  else if (w.ends_with("ss")) return;
  else if (w.ends_with("s")) w.replace_suffix(1, "");
}

void step1b(Word& w) {
  if (w.ends_with("eed")) {
    if (w.measure(w.size() - 3) > 0) w.replace_suffix(3, "ee");
    return;
  }
  std::size_t cut = 0;
  if (w.ends_with("ed") && w.has_vowel(w.size() - 2)) cut = 2;
  else if (w.ends_with("ing") && w.has_vowel(w.size() - 3)) cut = 3;
  if (cut == 0) return;
  w.replace_suffix(cut, "");

  if (w.ends_with("at") || w.ends_with("bl") || w.ends_with("iz")) {
    w.replace_suffix(0, "e");
  } else if (w.double_consonant(w.size())) {
    const char c = w.back();
    if (c != 'l' && c != 's' && c != 'z') w.replace_suffix(1, "");
  } else if (w.measure(w.size()) == 1 && w.cvc(w.size())) {
    w.replace_suffix(0, "e");
  }
}

void step1c(Word& w) {
  if (w.ends_with("y") && w.has_vowel(w.size() - 1)) w.replace_suffix(1, "i");
}

void step2(Word& w) {
  apply_longest(w,
                {{"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},  {"anci", "ance"},
                 {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},    {"entli", "ent"},
                 {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
                 {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
                 {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"}},
                0);
}

void step3(Word& w) {
  apply_longest(w,
                {{"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
                 {"ical", "ic"},  {"ful", ""},   {"ness", ""}},
                0);
}

void step4(Word& w) {
  static constexpr std::string_view suffixes[] = {
      "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
      "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize"};
  std::string_view best;
  for (std::string_view s : suffixes) {
    if (w.ends_with(s) && s.size() > best.size()) best = s;
  }
  if (best.empty()) return;
  const std::size_t stem_len = w.size() - best.size();
  if (w.measure(stem_len) <= 1) return;
  if (best == "ion") {
    if (stem_len == 0) return;
    const char c = w.str()[stem_len - 1];
    if (c != 's' && c != 't') return;
  }
  w.replace_suffix(best.size(), "");
}

void step5(Word& w) {
  if (w.ends_with("e")) {
    const std::size_t stem_len = w.size() - 1;
    const int m = w.measure(stem_len);
    if (m > 1 || (m == 1 && !w.cvc(stem_len))) w.replace_suffix(1, "");
  }
  if (w.measure(w.size()) > 1 && w.double_consonant(w.size()) && w.back() == 'l') {
    w.replace_suffix(1, "");
  }
}

}  // namespace

std::string porter_stem(std::string_view word) {
  if (word.empty()) return {};
  Word w(word);
  step1a(w);
  step1b(w);
  step1c(w);
  step2(w);
  step3(w);
  step4(w);
  step5(w);
  return w.str();
}

std::string stem(std::string_view word) {
  std::string current(word);
  for (;;) {
    std::string next = porter_stem(current);
    if (next == current || next.empty()) return current;
    current = std::move(next);
  }
}

}  // namespace parkkw
