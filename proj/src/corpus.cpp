#include "idiolect/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>

#include "json.hpp"

#include "idiolect/error.hpp"
#include "idiolect/unicode.hpp"

namespace idiolect {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::string to_lf(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r') {
      out.push_back('\n');
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

bool is_blank(char32_t c) { return c == U' ' || c == U'\t' || c == 0xA0; }

bool is_fully_upper(std::u32string_view word) {
  return std::none_of(word.begin(), word.end(), [](char32_t c) { return unicode::is_lower(c); });
}

bool starts_with(std::u32string_view s, std::size_t at, std::u32string_view prefix) {
  return s.size() >= at + prefix.size() && s.substr(at, prefix.size()) == prefix;
}

struct Heading {
  std::size_t name_begin;
  std::size_t name_end;
  std::size_t body_begin;
};

class HeadingMatcher {
 public:
  explicit HeadingMatcher(const ParseRules& rules) : rules_(rules) {
    delimiters_ = unicode::decode(rules.delimiters);
    for (const auto& pair : rules.stage_direction_brackets) {
      brackets_.emplace_back(unicode::decode(pair.open), unicode::decode(pair.close));
    }
  }

  std::optional<Heading> match(std::u32string_view line) const {
    std::size_t p = 0;
    while (p < line.size() && is_blank(line[p])) ++p;
    const std::size_t name_begin = p;
    std::optional<Heading> best;
    for (std::size_t words = 1; words <= rules_.max_name_words; ++words) {
      const std::size_t word_begin = p;
      const std::size_t word_end = scan_word(line, p);
      if (word_end == word_begin) break;
      const std::u32string_view word = line.substr(word_begin, word_end - word_begin);
      if (rules_.uppercase_names_only && !is_fully_upper(word)) break;
      p = word_end;

      if (auto body = delimiter_after(line, p)) best = Heading{name_begin, p, *body};

      if (words == rules_.max_name_words || p >= line.size()) break;
      if (line[p] == U' ' && p + 1 < line.size() && unicode::is_upper(line[p + 1])) {
        p += 1;
        continue;
      }
      // abbreviation dot between two fully uppercase words: "MRS. ALVING"
      if (line[p] == U'.' && p + 2 < line.size() && line[p + 1] == U' ' && is_fully_upper(word)) {
        const std::size_t next_end = scan_word(line, p + 2);
        const auto next = line.substr(p + 2, next_end - (p + 2));
        if (next.size() >= 2 && is_fully_upper(next)) {
          p += 2;
          continue;
        }
      }
      break;
    }
    return best;
  }

 private:
  static std::size_t scan_word(std::u32string_view line, std::size_t p) {
    if (p >= line.size() || !unicode::is_upper(line[p])) return p;
    ++p;
    while (p < line.size()) {
      const char32_t c = line[p];
      if (unicode::is_alpha(c)) {
        ++p;
      } else if ((c == U'\'' || c == U'’' || c == U'-') && p + 1 < line.size() &&
                 unicode::is_alpha(line[p + 1])) {
        p += 2;
      } else {
        break;
      }
    }
    return p;
  }

  bool is_delimiter_at(std::u32string_view line, std::size_t p) const {
    return p < line.size() && delimiters_.find(line[p]) != std::u32string::npos &&
           (p + 1 == line.size() || unicode::is_space(line[p + 1]));
  }

  // Position where the dialogue begins, if a delimiter (optionally preceded by one
  // bracketed aside) follows the name ending at p.
  std::optional<std::size_t> delimiter_after(std::u32string_view line, std::size_t p) const {
    if (is_delimiter_at(line, p)) return p + 1;
    std::size_t q = p;
    while (q < line.size() && is_blank(line[q])) ++q;
    for (const auto& [open, close] : brackets_) {
      if (!starts_with(line, q, open)) continue;
      int depth = 0;
      std::size_t r = q;
      while (r < line.size()) {
        if (starts_with(line, r, open)) {
          ++depth;
          r += open.size();
        } else if (starts_with(line, r, close)) {
          --depth;
          r += close.size();
          if (depth == 0) break;
        } else {
          ++r;
        }
      }
      if (depth == 0 && is_delimiter_at(line, r)) return r + 1;
    }
    return std::nullopt;
  }

  const ParseRules& rules_;
  std::u32string delimiters_;
  std::vector<std::pair<std::u32string, std::u32string>> brackets_;
};

}  // namespace

void ParseRules::validate() const {
  if (max_name_words == 0) throw Error(ErrorKind::Config, "max_name_words must be at least 1");
  if (delimiters.empty()) throw Error(ErrorKind::Config, "delimiters must be non-empty");
  if (!unicode::is_valid(delimiters)) throw Error(ErrorKind::Config, "delimiters must be UTF-8");
  std::set<std::string> seen;
  for (const auto& [open, close] : stage_direction_brackets) {
    if (open.empty() || close.empty()) {
      throw Error(ErrorKind::Config, "stage direction brackets must be non-empty strings");
    }
    if (!seen.insert(open).second || !seen.insert(close).second) {
      throw Error(ErrorKind::Config, "stage direction bracket strings must be distinct");
    }
  }
  for (const auto& a : seen) {
    for (const auto& b : seen) {
      if (a != b && b.starts_with(a)) {
        throw Error(ErrorKind::Config, "bracket strings overlap: '" + a + "' and '" + b + "'");
      }
    }
  }
}

RawDocument make_document(std::string source_id, std::string_view bytes,
                          const LoadOptions& options) {
  RawDocument doc;
  doc.source_id = std::move(source_id);
  if (bytes.starts_with("\xEF\xBB\xBF")) {
    bytes.remove_prefix(3);
    doc.encoding_note = "utf-8 (bom)";
  } else {
    doc.encoding_note = "utf-8";
  }
  std::string text;
  if (unicode::is_valid(bytes)) {
    text.assign(bytes);
  } else if (options.latin1_fallback) {
    text = unicode::latin1_to_utf8(bytes);
    doc.encoding_note = "latin-1 (transcoded)";
  } else {
    try {
      unicode::decode(bytes);
    } catch (const Error& e) {
      throw Error(ErrorKind::InvalidEncoding, doc.source_id + ": " + e.what());
    }
  }
  doc.text = unicode::nfc(to_lf(text));
  if (doc.text.empty()) throw Error(ErrorKind::EmptyDocument, doc.source_id + " is empty");
  return doc;
}

RawDocument load_document(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return make_document(path.filename().string(), bytes, options);
}

RawDocument strip_boilerplate(const RawDocument& doc, const ParseRules& rules) {
  const std::string_view text = doc.text;
  const auto lines = split_lines(text);
  std::optional<std::size_t> start_line;
  std::optional<std::size_t> end_line;
  bool any_end = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const bool has_end = lines[i].find(rules.boilerplate_end) != std::string_view::npos;
    any_end = any_end || has_end;
    if (!start_line && lines[i].find(rules.boilerplate_start) != std::string_view::npos) {
      start_line = i;
    } else if (start_line && has_end) {
      end_line = i;
      break;
    }
  }
  if (!start_line && !any_end) return doc;
  if (!start_line || !end_line) {
    throw Error(ErrorKind::UnbalancedBoilerplateMarkers,
                doc.source_id + ": found " + (start_line ? "start" : "end") +
                    " marker without its counterpart (truncated e-text?)");
  }
  // lines are views into text; the start line is always LF-terminated here
  const auto& start = lines[*start_line];
  const std::size_t begin = static_cast<std::size_t>(start.data() - text.data()) + start.size() + 1;
  const std::size_t end = static_cast<std::size_t>(lines[*end_line].data() - text.data());
  RawDocument out = doc;
  out.text = std::string(text.substr(begin, end - begin));
  return out;
}

std::string remove_stage_directions(std::string_view text, const std::vector<BracketPair>& brackets,
                                    bool* unmatched) {
  struct Token {
    std::size_t pos;
    std::size_t len;
    std::size_t pair;
    bool open;
  };
  std::string current(text);
  for (;;) {
    std::vector<Token> tokens;
    for (std::size_t i = 0; i < current.size();) {
      bool hit = false;
      for (std::size_t k = 0; k < brackets.size() && !hit; ++k) {
        if (std::string_view(current).substr(i).starts_with(brackets[k].open)) {
          tokens.push_back({i, brackets[k].open.size(), k, true});
          i += brackets[k].open.size();
          hit = true;
        } else if (std::string_view(current).substr(i).starts_with(brackets[k].close)) {
          tokens.push_back({i, brackets[k].close.size(), k, false});
          i += brackets[k].close.size();
          hit = true;
        }
      }
      if (!hit) ++i;
    }
    // innermost spans: an opener whose very next bracket token is its own closer
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (std::size_t t = 0; t + 1 < tokens.size(); ++t) {
      if (tokens[t].open && !tokens[t + 1].open && tokens[t].pair == tokens[t + 1].pair) {
        spans.emplace_back(tokens[t].pos, tokens[t + 1].pos + tokens[t + 1].len);
        ++t;
      }
    }
    if (spans.empty()) {
      if (unmatched) *unmatched = !tokens.empty();
      return current;
    }
    std::string next;
    next.reserve(current.size());
    std::size_t cursor = 0;
    for (const auto& [b, e] : spans) {
      next.append(current, cursor, b - cursor);
      cursor = e;
    }
    next.append(current, cursor, std::string::npos);
    current = std::move(next);
  }
}

std::string normalize_speaker(std::string_view raw, const ParseRules& rules) {
  std::string name = unicode::collapse_whitespace(raw);
  if (!rules.normalize_names) return name;
  std::u32string folded = unicode::decode(unicode::fold(name));
  while (!folded.empty() && !unicode::is_alnum(folded.back())) folded.pop_back();
  return unicode::encode(folded);
}

PlayScript parse_play(const RawDocument& doc, const ParseRules& rules, const PlayMeta& meta,
                      std::vector<std::string>* warnings) {
  rules.validate();
  const HeadingMatcher matcher(rules);

  PlayScript play{meta.play_id, meta.language, meta.translator, {}};
  std::string speaker;
  std::string pending;
  bool open_turn = false;

  auto flush = [&] {
    if (!open_turn) return;
    bool unmatched = false;
    std::string text = remove_stage_directions(pending, rules.stage_direction_brackets, &unmatched);
    const std::size_t ordinal = play.turns.size();
    if (unmatched && warnings) {
      warnings->push_back(play.play_id + " turn " + std::to_string(ordinal) + " (" + speaker +
                          "): unmatched stage-direction bracket kept verbatim");
    }
    play.turns.push_back({speaker, unicode::collapse_whitespace(text), ordinal});
    pending.clear();
  };

  for (const auto line_view : split_lines(doc.text)) {
    const std::u32string line = unicode::decode(line_view);
    if (const auto heading = matcher.match(line)) {
      flush();
      const auto raw_name =
          unicode::encode(std::u32string_view(line).substr(
              heading->name_begin, heading->name_end - heading->name_begin));
      speaker = normalize_speaker(raw_name, rules);
      pending = unicode::encode(std::u32string_view(line).substr(heading->body_begin));
      open_turn = true;
    } else if (open_turn) {
      pending.push_back('\n');
      pending.append(line_view);
    }
  }
  flush();

  if (play.turns.empty()) {
    throw Error(ErrorKind::NoTurnsFound,
                doc.source_id + ": no speaker headings matched (format mismatch?)");
  }
  return play;
}

std::map<std::string, std::string> extract_character_text(const PlayScript& play) {
  std::map<std::string, std::string> out;
  for (const auto& turn : play.turns) {
    auto [it, inserted] = out.try_emplace(turn.speaker, turn.text);
    if (!inserted) {
      it->second.push_back(' ');
      it->second.append(turn.text);
    }
  }
  return out;
}

std::string to_interchange_json(const PlayScript& play) {
  nlohmann::ordered_json j;
  j["play_id"] = play.play_id;
  j["language"] = play.language;
  j["translator"] = play.translator;
  auto turns = nlohmann::ordered_json::array();
  for (const auto& t : play.turns) {
    nlohmann::ordered_json turn;
    turn["speaker"] = t.speaker;
    turn["text"] = t.text;
    turn["ordinal"] = t.ordinal;
    turns.push_back(std::move(turn));
  }
  j["turns"] = std::move(turns);
  return j.dump(2) + "\n";
}

PlayScript from_interchange_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    PlayScript play;
    play.play_id = j.at("play_id").get<std::string>();
    play.language = j.at("language").get<std::string>();
    play.translator = j.at("translator").get<std::string>();
    for (const auto& t : j.at("turns")) {
      play.turns.push_back({unicode::nfc(t.at("speaker").get<std::string>()),
                            unicode::nfc(t.at("text").get<std::string>()),
                            t.at("ordinal").get<std::size_t>()});
    }
    for (std::size_t i = 1; i < play.turns.size(); ++i) {
      if (play.turns[i].ordinal <= play.turns[i - 1].ordinal) {
        throw Error(ErrorKind::MalformedInput, "turn ordinals must be strictly increasing");
      }
    }
    if (play.turns.empty()) throw Error(ErrorKind::NoTurnsFound, play.play_id + " has no turns");
    return play;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedInput, std::string("interchange JSON: ") + e.what());
  }
}

}  // namespace idiolect
