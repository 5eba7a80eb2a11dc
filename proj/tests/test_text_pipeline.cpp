#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "parkkw/errors.hpp"
#include "parkkw/porter_stemmer.hpp"
#include "parkkw/text_pipeline.hpp"
#include "parkkw/utf8.hpp"
#include "support.hpp"

using namespace parkkw;

namespace {

const TextPipeline& pipeline() { return test::resources().pipeline; }

Token tok(std::string stem, Pos pos, Field field, int position) {
  Token t;
  t.surface = stem;
  t.stem = std::move(stem);
  t.pos = pos;
  t.field = field;
  t.position = position;
  return t;
}

const Candidate* find(const std::vector<Candidate>& cs, const std::string& phrase) {
  for (const auto& c : cs) {
    if (c.phrase == phrase) return &c;
  }
  return nullptr;
}

FieldedDocument english(std::string title, std::string content = "") {
  FieldedDocument d;
  d.domain_id = "example.com";
  d.language = "en";
  d.title = std::move(title);
  d.content = std::move(content);
  return d;
}

}  // namespace

TEST_SUITE("text-pipeline") {

TEST_CASE("tokenize title example") {
  const auto tokens = pipeline().tokenize(english("Cheap Flights to Tokyo"));
  REQUIRE(tokens.size() == 3);
  CHECK(tokens[0].stem == "cheap");
  CHECK(tokens[0].pos == Pos::Adjective);
  CHECK(tokens[1].stem == "flight");
  CHECK(tokens[1].pos == Pos::Noun);
  CHECK(tokens[2].stem == "tokyo");
  CHECK(tokens[2].pos == Pos::Noun);
  for (const auto& t : tokens) CHECK(t.field == Field::Title);
  // "to" was dropped but still occupies a position.
  CHECK(tokens[1].position == 1);
  CHECK(tokens[2].position == 3);
}

TEST_CASE("tokenize edge cases") {
  CHECK(pipeline().tokenize(english("")).empty());
  const auto tokens = pipeline().tokenize_field("running runs ran", Field::Content);
  REQUIRE(tokens.size() == 3);
  CHECK(tokens[0].stem == "run");
  CHECK(tokens[1].stem == "run");
  CHECK(tokens[2].stem == "ran");

  const auto mixed = pipeline().tokenize_field("Hotel's 2024 rooms, 42nd street!", Field::Content);
  std::vector<std::string> stems;
  for (const auto& t : mixed) stems.push_back(t.stem);
  CHECK(stems == std::vector<std::string>{"hotel", "room", "42nd", "street"});

  auto german = english("Günstige Flüge");
  german.language = "de";
  CHECK_THROWS_AS(pipeline().tokenize(german), UnsupportedLanguage);
}

TEST_CASE("positions strictly increase within a field and stems are lowercase") {
  const auto tokens = pipeline().tokenize(english(
      "Best Coffee Beans - Fresh Roasted", "Our coffee beans are roasted weekly. Free shipping!"));
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i].field == tokens[i - 1].field) CHECK(tokens[i].position > tokens[i - 1].position);
  }
  for (const auto& t : tokens) {
    CHECK_FALSE(t.stem.empty());
    CHECK(t.stem == utf8::to_lower(t.stem));
  }
}

TEST_CASE("shipped stopword list") {
  std::ifstream in(test::data_dir() / "stopwords_en.txt");
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  CHECK(lines == 571);
  CHECK(pipeline().is_stopword("to"));
  CHECK(pipeline().is_stopword("the"));
  CHECK_FALSE(pipeline().is_stopword("hotel"));
}

TEST_CASE("porter_stem matches frozen reference pairs") {
  std::ifstream in(test::test_data() / "porter_pairs.tsv");
  REQUIRE(in);
  int checked = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    const std::string word = line.substr(0, tab);
    const std::string expected = line.substr(tab + 1);
    INFO(word);
    CHECK(porter_stem(word) == expected);
    ++checked;
  }
  CHECK(checked > 600);
}

TEST_CASE("stem is idempotent over the lexicon") {
  std::ifstream in(test::data_dir() / "lexicon_en.tsv");
  int checked = 0;
  for (std::string line; std::getline(in, line);) {
    const std::string word = line.substr(0, line.find('\t'));
    const std::string once = stem(word);
    INFO(word);
    CHECK(stem(once) == once);
    ++checked;
  }
  CHECK(checked == 10000);
}

TEST_CASE("tagger falls back to suffix rules") {
  const auto& tagger = pipeline().tagger();
  CHECK(tagger.tag("flights", "flight", false) == Pos::Noun);
  CHECK(tagger.tag("blorpness", "blorp", false) == Pos::Noun);
  CHECK(tagger.tag("blorpation", "blorpat", false) == Pos::Noun);
  CHECK(tagger.tag("blorpment", "blorpment", false) == Pos::Noun);
  CHECK(tagger.tag("blorpize", "blorpiz", false) == Pos::Verb);
  CHECK(tagger.tag("blorpate", "blorpat", false) == Pos::Verb);
  CHECK(tagger.tag("blorpous", "blorpou", false) == Pos::Adjective);
  CHECK(tagger.tag("blorpful", "blorpful", false) == Pos::Adjective);
  CHECK(tagger.tag("blorpable", "blorpabl", false) == Pos::Adjective);
  CHECK(tagger.tag("blorp", "blorp", true) == Pos::Noun);
  CHECK(tagger.tag("blorp", "blorp", false) == Pos::Other);
}

TEST_CASE("extract_candidates chunk rule") {
  const IdfStore empty;
  const auto cs = extract_candidates(
      {tok("cheap", Pos::Adjective, Field::Title, 0), tok("flight", Pos::Noun, Field::Title, 1)}, empty);
  REQUIRE(cs.size() == 3);
  CHECK(cs[0].phrase == "cheap");
  CHECK(cs[1].phrase == "flight");
  CHECK(cs[2].phrase == "cheap flight");
  CHECK(cs[2].is_np_chunk);
  CHECK_FALSE(cs[0].is_np_chunk);
  CHECK(cs[2].per_field_tf[index_of(Field::Title)] == 1);
}

TEST_CASE("extract_candidates counting") {
  const IdfStore empty;
  const auto single = extract_candidates({tok("hotel", Pos::Noun, Field::Content, 0)}, empty);
  REQUIRE(single.size() == 1);
  CHECK(single[0].per_field_tf[index_of(Field::Content)] == 1);
  CHECK(single[0].per_field_tf[index_of(Field::Title)] == 0);
  CHECK(single[0].total_tf() == 1);

  const auto twice = extract_candidates(
      {tok("hotel", Pos::Other, Field::Content, 0), tok("hotel", Pos::Other, Field::Content, 1)}, empty);
  REQUIRE(twice.size() == 1);
  CHECK(twice[0].per_field_tf[index_of(Field::Content)] == 2);
  CHECK(extract_candidates({}, empty).empty());
}

TEST_CASE("chunks need adjacency, a noun head and stay inside one field") {
  const IdfStore empty;
  // "flight (to) tokyo": the removed stopword breaks adjacency.
  auto cs = extract_candidates(
      {tok("flight", Pos::Noun, Field::Title, 0), tok("tokyo", Pos::Noun, Field::Title, 2)}, empty);
  CHECK(find(cs, "flight tokyo") == nullptr);
  // Adjective-final runs are not chunks.
  cs = extract_candidates(
      {tok("hotel", Pos::Noun, Field::Title, 0), tok("cheap", Pos::Adjective, Field::Title, 1)}, empty);
  CHECK(cs.size() == 2);
  // Across fields.
  cs = extract_candidates(
      {tok("cheap", Pos::Adjective, Field::Title, 0), tok("flight", Pos::Noun, Field::Content, 0)}, empty);
  CHECK(find(cs, "cheap flight") == nullptr);
  // Four-word chunk yields 2- and 3-grams ending at each noun, never 4-grams.
  cs = extract_candidates({tok("cheap", Pos::Adjective, Field::Title, 0),
                           tok("tokyo", Pos::Noun, Field::Title, 1),
                           tok("flight", Pos::Noun, Field::Title, 2),
                           tok("deal", Pos::Noun, Field::Title, 3)},
                          empty);
  std::vector<std::string> phrases;
  for (const auto& c : cs) phrases.push_back(c.phrase);
  CHECK(phrases == std::vector<std::string>{"cheap", "tokyo", "cheap tokyo", "flight",
                                            "tokyo flight", "cheap tokyo flight", "deal",
                                            "flight deal", "tokyo flight deal"});
}

TEST_CASE("candidate invariants over the fixture corpus") {
  for (const auto& dm : test::fixture_corpus()->domains) {
    if (!dm.usable) continue;
    const auto tokens = pipeline().tokenize(dm.doc);
    const auto cs = extract_candidates(tokens, IdfStore{});
    std::set<std::string> seen;
    for (const auto& c : cs) {
      CHECK(seen.insert(c.phrase).second);
      CHECK(c.total_tf() >= 1);
      std::istringstream words(c.phrase);
      std::vector<std::string> parts;
      for (std::string w; words >> w;) parts.push_back(w);
      CHECK(parts.size() >= 1);
      CHECK(parts.size() <= 3);
      std::istringstream surface(c.surface);
      std::vector<std::string> shown;
      for (std::string w; surface >> w;) shown.push_back(w);
      REQUIRE(shown.size() == parts.size());
      for (const auto& w : shown) CHECK_FALSE(pipeline().is_stopword(w));
      if (parts.size() > 1) {
        CHECK(c.is_np_chunk);
        CHECK(c.head_pos == Pos::Noun);
      }
    }
    // Deterministic.
    const auto again = extract_candidates(tokens, IdfStore{});
    REQUIRE(again.size() == cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) CHECK(again[i].phrase == cs[i].phrase);
  }
}

TEST_CASE("update_idf") {
  Candidate hotel;
  hotel.phrase = "hotel";
  auto idf = update_idf(IdfStore{}, {hotel});
  CHECK(idf.doc_count == 1);
  CHECK(idf.lookup("hotel") == 1);

  IdfStore four;
  four.doc_count = 4;
  four.df["hotel"] = 2;
  const auto five = update_idf(four, {hotel});
  CHECK(five.doc_count == 5);
  CHECK(five.lookup("hotel") == 3);
  CHECK(four.lookup("hotel") == 2);  // the input store is untouched

  const auto dup = update_idf(IdfStore{}, {hotel, hotel});
  CHECK(dup.lookup("hotel") == 1);

  for (const auto& [phrase, df] : test::fixture_corpus()->idf.df) {
    CHECK(df <= test::fixture_corpus()->idf.doc_count);
  }
}

TEST_CASE("tfidf values") {
  Candidate c;
  c.phrase = "hotel";
  c.per_field_tf[index_of(Field::Content)] = 2;
  IdfStore idf;
  idf.doc_count = 100;
  idf.df["hotel"] = 10;
  CHECK(tfidf(c, Field::Title, idf) == 0.0);
  CHECK(tfidf(c, Field::Content, idf) == doctest::Approx(4.527490519355563).epsilon(1e-12));

  idf.df["hotel"] = 100;
  const double everywhere = tfidf(c, Field::Content, idf);
  CHECK(everywhere > 0.0);
  CHECK(everywhere == doctest::Approx(2 * std::log(1 + 0.5 / 100.5)));
  CHECK(everywhere < 0.01);
}

TEST_CASE("tfidf monotone in tf and df") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + static_cast<int>(rng() % 1000);
    const int df = static_cast<int>(rng() % (n + 1));
    const int tf = static_cast<int>(rng() % 20);
    Candidate c;
    c.phrase = "w";
    c.per_field_tf[0] = tf;
    IdfStore idf;
    idf.doc_count = n;
    idf.df["w"] = df;
    const double base = tfidf(c, Field::Title, idf);
    c.per_field_tf[0] = tf + 1;
    CHECK(tfidf(c, Field::Title, idf) >= base);
    c.per_field_tf[0] = tf;
    if (df < n) {
      idf.df["w"] = df + 1;
      CHECK(tfidf(c, Field::Title, idf) <= base);
    }
  }
}

}  // TEST_SUITE
