#include "parkkw/html_ingest.hpp"

#include <iconv.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <chrono>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include <httplib.h>
#include <json.hpp>

#include "parkkw/errors.hpp"
#include "parkkw/utf8.hpp"

namespace parkkw {

const std::string& FieldedDocument::field(Field f) const {
  switch (f) {
    case Field::Title: return title;
    case Field::Content: return content;
    case Field::MetaKeywords: return meta_keywords;
    case Field::MetaDescription: return meta_description;
    case Field::Headers: return headers;
    case Field::Anchors: return anchors;
  }
  return content;
}

bool FieldedDocument::unusable() const {
  return std::all_of(kAllFields.begin(), kAllFields.end(),
                     [this](Field f) { return field(f).empty(); });
}

namespace {

std::int64_t now_utc() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i])))
      return false;
  }
  return true;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string ascii_upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  const auto is_ws = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
  };
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return s;
}

DomainRecord fetch_url(const std::string& url, const FetchOptions& options) {
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end + 3);
  const std::string origin = url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(origin);
  if (!client.is_valid()) throw FetchError("cannot fetch " + url + ": unsupported scheme");
  const auto timeout = std::chrono::milliseconds(options.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_follow_location(true);
  auto res = client.Get(path);
  if (!res) {
    throw FetchError("cannot fetch " + url + ": " + httplib::to_string(res.error()));
  }
  if (res->status >= 400) {
    throw FetchError("cannot fetch " + url + ": HTTP " + std::to_string(res->status));
  }
  DomainRecord record;
  record.html_source = std::move(res->body);
  record.fetched_at = now_utc();
  return record;
}

}  // namespace

DomainRecord load_record(const std::string& path_or_url,
                         std::vector<std::string> anchors,
                         std::vector<std::string> referrers,
                         const FetchOptions& options) {
  DomainRecord record;
  if (starts_with_ci(path_or_url, "http://") || starts_with_ci(path_or_url, "https://")) {
    if (!options.allow_fetch) {
      throw FetchError("live fetch of " + path_or_url + " is disabled (use --fetch)");
    }
    record = fetch_url(path_or_url, options);
  } else {
    std::ifstream in(path_or_url, std::ios::binary);
    if (!in) throw FetchError("cannot open " + path_or_url);
    record.html_source.assign(std::istreambuf_iterator<char>(in), {});
    if (in.bad()) throw FetchError("read failed for " + path_or_url);
    std::error_code ec;
    const auto mtime = std::filesystem::last_write_time(path_or_url, ec);
    if (!ec) {
      const auto sys = std::chrono::file_clock::to_sys(mtime);
      record.fetched_at =
          std::chrono::duration_cast<std::chrono::seconds>(sys.time_since_epoch()).count();
    }
  }
  if (record.html_source.empty()) throw EmptyBody(path_or_url + " has an empty body");
  record.anchor_texts = std::move(anchors);
  record.referrer_urls = std::move(referrers);
  return record;
}

// ---------------------------------------------------------------------------
// Encoding

namespace {

std::string canonical_charset(std::string_view raw) {
  std::string name = ascii_upper(trim(raw));
  while (!name.empty() && (name.back() == '"' || name.back() == '\'' || name.back() == ';'))
    name.pop_back();
  while (!name.empty() && (name.front() == '"' || name.front() == '\'')) name.erase(0, 1);
  if (name == "UTF8") return "UTF-8";
  if (name == "LATIN1" || name == "LATIN-1" || name == "ISO8859-1" || name == "ISO_8859-1")
    return "ISO-8859-1";
  if (name == "CP1252") return "WINDOWS-1252";
  return name;
}

struct Attr {
  std::string name;
  std::string value;
};

// Parses attributes from the inside of a tag, starting after the tag name.
std::vector<Attr> parse_attributes(std::string_view s) {
  std::vector<Attr> attrs;
  std::size_t i = 0;
  const auto is_ws = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '/';
  };
  while (i < s.size()) {
    while (i < s.size() && is_ws(s[i])) ++i;
    if (i >= s.size()) break;
    std::size_t start = i;
    while (i < s.size() && !is_ws(s[i]) && s[i] != '=') ++i;
    Attr attr{ascii_lower(s.substr(start, i - start)), {}};
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    if (i < s.size() && s[i] == '=') {
      ++i;
      while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
      if (i < s.size() && (s[i] == '"' || s[i] == '\'')) {
        const char quote = s[i++];
        start = i;
        while (i < s.size() && s[i] != quote) ++i;
        attr.value = std::string(s.substr(start, i - start));
        if (i < s.size()) ++i;
      } else {
        start = i;
        while (i < s.size() && !(s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r'))
          ++i;
        attr.value = std::string(s.substr(start, i - start));
      }
    }
    if (!attr.name.empty()) attrs.push_back(std::move(attr));
  }
  return attrs;
}

const std::string* find_attr(const std::vector<Attr>& attrs, std::string_view name) {
  for (const auto& a : attrs) {
    if (a.name == name) return &a.value;
  }
  return nullptr;
}

// Finds the end of a tag that opens at `open` ('<'), honouring quotes.
std::size_t tag_end(std::string_view s, std::size_t open) {
  char quote = 0;
  for (std::size_t i = open + 1; i < s.size(); ++i) {
    const char c = s[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      // Quotes only start attribute values right after '='.
      if (i > 0 && s[i - 1] == '=') quote = c;
    } else if (c == '>') {
      return i;
    }
  }
  return std::string_view::npos;
}

bool charset_decodes(std::string_view bytes, const std::string& charset) {
  try {
    decode_to_utf8(bytes, charset);
    return true;
  } catch (const DecodeError&) {
    return false;
  }
}

}  // namespace

std::string detect_encoding(std::string_view bytes) {
  if (bytes.size() >= 3 && static_cast<unsigned char>(bytes[0]) == 0xEF &&
      static_cast<unsigned char>(bytes[1]) == 0xBB && static_cast<unsigned char>(bytes[2]) == 0xBF)
    return "UTF-8";
  if (bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0xFF &&
      static_cast<unsigned char>(bytes[1]) == 0xFE)
    return "UTF-16LE";
  if (bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0xFE &&
      static_cast<unsigned char>(bytes[1]) == 0xFF)
    return "UTF-16BE";

  std::optional<std::string> http_equiv;
  std::optional<std::string> meta_charset;
  std::size_t pos = 0;
  while ((pos = bytes.find('<', pos)) != std::string_view::npos) {
    if (!starts_with_ci(bytes.substr(pos), "<meta")) {
      ++pos;
      continue;
    }
    const std::size_t end = tag_end(bytes, pos);
    if (end == std::string_view::npos) break;
    const auto attrs = parse_attributes(bytes.substr(pos + 5, end - pos - 5));
    if (const auto* equiv = find_attr(attrs, "http-equiv");
        equiv && ascii_lower(trim(*equiv)) == "content-type" && !http_equiv) {
      if (const auto* content = find_attr(attrs, "content")) {
        const std::string lower = ascii_lower(*content);
        const auto at = lower.find("charset=");
        if (at != std::string::npos) {
          std::string_view rest = std::string_view(*content).substr(at + 8);
          rest = rest.substr(0, rest.find_first_of("; "));
          http_equiv = canonical_charset(rest);
        }
      }
    }
    if (const auto* cs = find_attr(attrs, "charset"); cs && !meta_charset) {
      meta_charset = canonical_charset(*cs);
    }
    pos = end;
  }
  for (const auto& declared : {http_equiv, meta_charset}) {
    if (declared && !declared->empty() && charset_decodes(bytes, *declared)) return *declared;
  }
  if (utf8::is_valid(bytes)) return "UTF-8";
  return "ISO-8859-1";
}

std::string decode_to_utf8(std::string_view bytes, const std::string& charset) {
  const std::string name = canonical_charset(charset);
  if (name == "UTF-8" || name == "US-ASCII" || name == "ASCII") {
    std::string_view body = bytes;
    if (body.size() >= 3 && body.substr(0, 3) == "\xEF\xBB\xBF") body.remove_prefix(3);
    if (!utf8::is_valid(body)) throw DecodeError("bytes are not valid " + name);
    return std::string(body);
  }
  if (name == "ISO-8859-1") {
    std::string out;
    out.reserve(bytes.size());
    for (char c : bytes) utf8::append(out, static_cast<unsigned char>(c));
    return out;
  }

  iconv_t cd = iconv_open("UTF-8", name.c_str());
  if (cd == reinterpret_cast<iconv_t>(-1)) throw DecodeError("unsupported charset " + name);
  std::string out;
  std::string input(bytes);
  char* in_ptr = input.data();
  std::size_t in_left = input.size();
  std::array<char, 4096> buffer{};
  bool failed = false;
  while (in_left > 0) {
    char* out_ptr = buffer.data();
    std::size_t out_left = buffer.size();
    const std::size_t rc = iconv(cd, &in_ptr, &in_left, &out_ptr, &out_left);
    out.append(buffer.data(), buffer.size() - out_left);
    if (rc == static_cast<std::size_t>(-1) && errno != E2BIG) {
      failed = true;
      break;
    }
  }
  iconv_close(cd);
  if (failed) throw DecodeError("bytes are not valid " + name);
  if (out.size() >= 3 && out.compare(0, 3, "\xEF\xBB\xBF") == 0) out.erase(0, 3);
  return out;
}

// ---------------------------------------------------------------------------
// Entities

namespace {

const std::unordered_map<std::string_view, char32_t>& entity_table() {
  static const std::unordered_map<std::string_view, char32_t> table = [] {
    std::unordered_map<std::string_view, char32_t> t = {
        {"amp", '&'},       {"lt", '<'},        {"gt", '>'},        {"quot", '"'},
        {"apos", '\''},     {"trade", 0x2122},  {"hellip", 0x2026}, {"mdash", 0x2014},
        {"ndash", 0x2013},  {"lsquo", 0x2018},  {"rsquo", 0x2019},  {"ldquo", 0x201C},
        {"rdquo", 0x201D},  {"bull", 0x2022},   {"euro", 0x20AC},   {"sbquo", 0x201A},
        {"bdquo", 0x201E},  {"dagger", 0x2020}, {"permil", 0x2030}, {"lsaquo", 0x2039},
        {"rsaquo", 0x203A}, {"oelig", 0x153},   {"OElig", 0x152},   {"scaron", 0x161},
        {"Scaron", 0x160},  {"Yuml", 0x178},    {"thinsp", 0x2009}, {"ensp", 0x2002},
        {"emsp", 0x2003},   {"zwnj", 0x200C},   {"zwj", 0x200D}};
    static constexpr std::array<std::string_view, 96> latin1 = {
        "nbsp",   "iexcl",  "cent",   "pound",  "curren", "yen",    "brvbar", "sect",
        "uml",    "copy",   "ordf",   "laquo",  "not",    "shy",    "reg",    "macr",
        "deg",    "plusmn", "sup2",   "sup3",   "acute",  "micro",  "para",   "middot",
        "cedil",  "sup1",   "ordm",   "raquo",  "frac14", "frac12", "frac34", "iquest",
        "Agrave", "Aacute", "Acirc",  "Atilde", "Auml",   "Aring",  "AElig",  "Ccedil",
        "Egrave", "Eacute", "Ecirc",  "Euml",   "Igrave", "Iacute", "Icirc",  "Iuml",
        "ETH",    "Ntilde", "Ograve", "Oacute", "Ocirc",  "Otilde", "Ouml",   "times",
        "Oslash", "Ugrave", "Uacute", "Ucirc",  "Uuml",   "Yacute", "THORN",  "szlig",
        "agrave", "aacute", "acirc",  "atilde", "auml",   "aring",  "aelig",  "ccedil",
        "egrave", "eacute", "ecirc",  "euml",   "igrave", "iacute", "icirc",  "iuml",
        "eth",    "ntilde", "ograve", "oacute", "ocirc",  "otilde", "ouml",   "divide",
        "oslash", "ugrave", "uacute", "ucirc",  "uuml",   "yacute", "thorn",  "yuml"};
    for (std::size_t i = 0; i < latin1.size(); ++i) t.emplace(latin1[i], 0xA0 + i);
    return t;
  }();
  return table;
}

// Entities browsers accept without the trailing semicolon.
bool legacy_entity(std::string_view name) {
  return name == "amp" || name == "lt" || name == "gt" || name == "quot" || name == "nbsp" ||
         name == "copy" || name == "reg";
}

}  // namespace

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c != '&') {
      out.push_back(c);
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (j < text.size() && text[j] == '#') {
      ++j;
      const bool hex = j < text.size() && (text[j] == 'x' || text[j] == 'X');
      if (hex) ++j;
      const std::size_t digits_start = j;
      char32_t cp = 0;
      while (j < text.size() && j - digits_start < 8 &&
             (hex ? std::isxdigit(static_cast<unsigned char>(text[j]))
                  : std::isdigit(static_cast<unsigned char>(text[j])))) {
        const char d = text[j];
        const int v = std::isdigit(static_cast<unsigned char>(d))
                          ? d - '0'
                          : std::tolower(static_cast<unsigned char>(d)) - 'a' + 10;
        cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(v);
        ++j;
      }
      if (j == digits_start) {
        out.push_back(c);
        ++i;
        continue;
      }
      if (j < text.size() && text[j] == ';') ++j;
      if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
      utf8::append(out, cp);
      i = j;
      continue;
    }
    while (j < text.size() && j - i <= 10 && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
    const std::string_view name = text.substr(i + 1, j - i - 1);
    const bool has_semicolon = j < text.size() && text[j] == ';';
    const auto& table = entity_table();
    const auto it = table.find(name);
    if (it != table.end() && (has_semicolon || legacy_entity(name))) {
      utf8::append(out, it->second);
      i = has_semicolon ? j + 1 : j;
    } else {
      out.push_back(c);
      ++i;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tag-soup field extraction

namespace {

const std::set<std::string_view>& block_tags() {
  static const std::set<std::string_view> tags = {
      "address", "article", "aside",  "blockquote", "body",   "br",     "button", "caption",
      "center",  "dd",      "div",    "dl",         "dt",     "fieldset", "figcaption",
      "figure",  "footer",  "form",   "h1",         "h2",     "h3",     "h4",     "h5",
      "h6",      "header",  "hr",     "html",       "iframe", "input",  "label",  "legend",
      "li",      "main",    "nav",    "ol",         "option", "p",      "pre",    "section",
      "select",  "table",   "tbody",  "td",         "textarea", "tfoot", "th",    "thead",
      "title",   "tr",      "ul"};
  return tags;
}

const std::set<std::string_view>& head_tags() {
  static const std::set<std::string_view> tags = {"head",  "title", "meta",     "link",
                                                  "base",  "style", "script",   "noscript",
                                                  "template"};
  return tags;
}

bool is_heading(std::string_view name) {
  return name.size() == 2 && name[0] == 'h' && name[1] >= '1' && name[1] <= '6';
}

// Collapses runs of whitespace into one space per line and drops blank lines.
std::string normalize_lines(std::string_view raw) {
  std::string out;
  std::string line;
  const auto flush = [&] {
    const std::string_view t = trim(line);
    if (!t.empty()) {
      if (!out.empty()) out.push_back('\n');
      out.append(t);
    }
    line.clear();
  };
  const std::u32string cps = utf8::decode(raw);
  bool pending_space = false;
  for (char32_t cp : cps) {
    if (cp == '\n') {
      flush();
      pending_space = false;
    } else if (utf8::is_space(cp)) {
      pending_space = true;
    } else {
      if (pending_space && !line.empty()) line.push_back(' ');
      pending_space = false;
      utf8::append(line, cp);
    }
  }
  flush();
  return out;
}

std::string collapse_spaces(std::string_view raw) {
  std::string s = normalize_lines(raw);
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string join_lines(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out.push_back('\n');
    out += p;
  }
  return out;
}

class TagSoupExtractor {
 public:
  explicit TagSoupExtractor(std::string_view html) : html_(html) {}

  void run() {
    std::size_t i = 0;
    while (i < html_.size()) {
      const char c = html_[i];
      if (c != '<') {
        const std::size_t next = html_.find('<', i);
        emit_text(html_.substr(i, next == std::string_view::npos ? html_.size() - i : next - i));
        i = next == std::string_view::npos ? html_.size() : next;
        continue;
      }
      if (html_.compare(i, 4, "<!--") == 0) {
        const std::size_t end = html_.find("-->", i + 4);
        i = end == std::string_view::npos ? html_.size() : end + 3;
        continue;
      }
      const char next = i + 1 < html_.size() ? html_[i + 1] : '\0';
      if (next == '!' || next == '?') {
        const std::size_t end = html_.find('>', i);
        i = end == std::string_view::npos ? html_.size() : end + 1;
        continue;
      }
      const bool closing = next == '/';
      const std::size_t name_start = i + (closing ? 2 : 1);
      if (name_start >= html_.size() ||
          !std::isalpha(static_cast<unsigned char>(html_[name_start]))) {
        // Stray '<' is broken markup, not text.
        ++i;
        continue;
      }
      const std::size_t end = tag_end(html_, i);
      if (end == std::string_view::npos) break;  // unterminated tag at EOF
      std::size_t name_end = name_start;
      while (name_end < end && (std::isalnum(static_cast<unsigned char>(html_[name_end])) ||
                                html_[name_end] == '-' || html_[name_end] == ':'))
        ++name_end;
      const std::string name = ascii_lower(html_.substr(name_start, name_end - name_start));
      i = end + 1;
      if (closing) {
        close_tag(name);
      } else {
        const bool self_closing = end > 0 && html_[end - 1] == '/';
        i = open_tag(name, html_.substr(name_end, end - name_end), self_closing, i);
      }
    }
    flush_heading();
  }

  std::string title() const { return title_; }
  std::string content() const { return normalize_lines(content_); }
  std::string headers() const { return join_lines(headers_); }
  std::string meta_keywords() const { return meta_keywords_; }
  std::string meta_description() const { return meta_description_; }

 private:
  // Returns the position to continue scanning from.
  std::size_t open_tag(const std::string& name, std::string_view attr_text, bool self_closing,
                       std::size_t after) {
    if (in_head_ && !head_tags().count(name)) in_head_ = false;
    if (name == "head") in_head_ = true;
    if (name == "body") in_head_ = false;

    if (name == "script" || name == "style" || name == "noscript" || name == "template") {
      if (self_closing) return after;
      return skip_raw_text(name, after);
    }
    if (name == "title") {
      const auto [text, resume] = raw_text_until(name, after);
      if (!title_seen_) {
        title_ = collapse_spaces(decode_entities(text));
        title_seen_ = true;
      }
      return resume;
    }
    if (name == "meta") {
      const auto attrs = parse_attributes(attr_text);
      const auto* meta_name = find_attr(attrs, "name");
      const auto* content = find_attr(attrs, "content");
      if (meta_name && content) {
        const std::string key = ascii_lower(trim(*meta_name));
        if (key == "keywords" && meta_keywords_.empty())
          meta_keywords_ = collapse_spaces(decode_entities(*content));
        else if (key == "description" && meta_description_.empty())
          meta_description_ = collapse_spaces(decode_entities(*content));
      }
      return after;
    }
    if (name == "img") {
      const auto attrs = parse_attributes(attr_text);
      if (const auto* alt = find_attr(attrs, "alt")) {
        content_.push_back(' ');
        emit_text(*alt);
        content_.push_back(' ');
      }
      return after;
    }
    if (is_heading(name)) {
      flush_heading();
      in_heading_ = !self_closing;
    }
    if (block_tags().count(name)) content_.push_back('\n');
    return after;
  }

  void close_tag(const std::string& name) {
    if (name == "head") in_head_ = false;
    if (is_heading(name) || name == "body" || name == "html") flush_heading();
    if (block_tags().count(name)) content_.push_back('\n');
  }

  std::pair<std::string_view, std::size_t> raw_text_until(const std::string& name,
                                                          std::size_t from) const {
    const std::string closer = "</" + name;
    std::size_t pos = from;
    while (true) {
      pos = html_.find("</", pos);
      if (pos == std::string_view::npos)
        return {html_.substr(from), html_.size()};
      if (starts_with_ci(html_.substr(pos), closer)) {
        const std::size_t end = html_.find('>', pos);
        return {html_.substr(from, pos - from),
                end == std::string_view::npos ? html_.size() : end + 1};
      }
      pos += 2;
    }
  }

  std::size_t skip_raw_text(const std::string& name, std::size_t from) const {
    return raw_text_until(name, from).second;
  }

  void emit_text(std::string_view raw) {
    if (in_head_) return;
    // A '>' outside any tag is debris from broken markup.
    std::string cleaned(raw);
    std::replace(cleaned.begin(), cleaned.end(), '>', ' ');
    const std::string text = decode_entities(cleaned);
    content_ += text;
    if (in_heading_) heading_ += text;
  }

  void flush_heading() {
    if (in_heading_) {
      std::string h = collapse_spaces(heading_);
      if (!h.empty()) headers_.push_back(std::move(h));
    }
    heading_.clear();
    in_heading_ = false;
  }

  std::string_view html_;
  std::string title_;
  bool title_seen_ = false;
  std::string content_;
  std::string meta_keywords_;
  std::string meta_description_;
  std::vector<std::string> headers_;
  std::string heading_;
  bool in_heading_ = false;
  bool in_head_ = false;
};

}  // namespace

FieldedDocument parse_fields(const DomainRecord& record, const std::string& encoding,
                             const std::string& language) {
  const std::string html = decode_to_utf8(record.html_source, encoding);
  TagSoupExtractor extractor(html);
  extractor.run();

  FieldedDocument doc;
  doc.domain_id = record.domain_id;
  doc.title = extractor.title();
  doc.content = extractor.content();
  doc.meta_keywords = extractor.meta_keywords();
  doc.meta_description = extractor.meta_description();
  doc.headers = extractor.headers();
  std::vector<std::string> anchors;
  anchors.reserve(record.anchor_texts.size());
  for (const auto& a : record.anchor_texts) {
    // Anchor texts are markup-free but may carry entities and stray brackets.
    std::string text = collapse_spaces(decode_entities(a));
    std::replace(text.begin(), text.end(), '<', ' ');
    std::replace(text.begin(), text.end(), '>', ' ');
    anchors.push_back(collapse_spaces(text));
  }
  doc.anchors = join_lines(anchors);
  doc.language = language;
  doc.encoding = canonical_charset(encoding);
  return doc;
}

// ---------------------------------------------------------------------------
// Corpus

std::vector<DomainRecord> load_corpus(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw FetchError("corpus directory " + dir.string() + " not found");
  std::vector<fs::path> entries;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) entries.push_back(entry.path());
  }
  std::sort(entries.begin(), entries.end());

  std::vector<DomainRecord> records;
  std::set<std::string> seen;
  for (const auto& path : entries) {
    const fs::path page = path / "page.html";
    if (!fs::exists(page)) continue;
    std::string domain_id = path.filename().string();
    std::vector<std::string> anchors;
    std::vector<std::string> referrers;
    std::optional<std::int64_t> fetched_at;
    const fs::path meta = path / "meta.json";
    if (fs::exists(meta)) {
      std::ifstream in(meta);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw FetchError("bad " + meta.string() + ": " + e.what());
      }
      domain_id = j.value("domain_id", domain_id);
      anchors = j.value("anchor_texts", std::vector<std::string>{});
      referrers = j.value("referrer_urls", std::vector<std::string>{});
      if (j.contains("fetched_at")) fetched_at = j["fetched_at"].get<std::int64_t>();
    }
    if (domain_id.empty()) throw FetchError("empty domain_id in " + path.string());
    if (!seen.insert(domain_id).second) throw FetchError("duplicate domain_id " + domain_id);
    DomainRecord record = load_record(page.string(), std::move(anchors), std::move(referrers));
    record.domain_id = domain_id;
    if (fetched_at) record.fetched_at = *fetched_at;
    records.push_back(std::move(record));
  }
  std::sort(records.begin(), records.end(),
            [](const DomainRecord& a, const DomainRecord& b) { return a.domain_id < b.domain_id; });
  return records;
}

}  // namespace parkkw
