#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace idiolect {

/// A loaded e-text: valid, NFC-normalized UTF-8 with LF line endings.
struct RawDocument {
  std::string source_id;
  std::string text;
  std::string encoding_note;
};

struct LoadOptions {
  /// Transcode from Latin-1 when the bytes are not valid UTF-8 instead of failing.
  bool latin1_fallback = false;
};

RawDocument load_document(const std::filesystem::path& path, const LoadOptions& options = {});

/// Builds a document from in-memory bytes with the same validation as load_document.
RawDocument make_document(std::string source_id, std::string_view bytes,
                          const LoadOptions& options = {});

struct BracketPair {
  std::string open;
  std::string close;
  bool operator==(const BracketPair&) const = default;
};

/// Heading rule: at line start (leading blanks allowed), 1..max_name_words words each
/// starting with an uppercase letter, optionally followed by one bracketed aside, then a
/// delimiter that ends the line or is followed by whitespace. Adjacent fully uppercase
/// words may be joined by an abbreviation dot ("MRS. ALVING.").
struct ParseRules {
  std::size_t max_name_words = 4;
  std::string delimiters = ".:";
  std::vector<BracketPair> stage_direction_brackets = {{"[", "]"}, {"(", ")"}};
  bool normalize_names = true;
  /// Only accept names with no lowercase letters ("NORA." but not "Nora.").
  bool uppercase_names_only = false;
  std::string boilerplate_start = "*** START OF";
  std::string boilerplate_end = "*** END OF";

  /// Throws Error(Config) when an invariant is violated.
  void validate() const;
};

struct SpeechTurn {
  std::string speaker;
  std::string text;
  std::size_t ordinal = 0;
  bool operator==(const SpeechTurn&) const = default;
};

struct PlayMeta {
  std::string play_id;
  std::string language;
  std::string translator = "original";
};

struct PlayScript {
  std::string play_id;
  std::string language;
  std::string translator;
  std::vector<SpeechTurn> turns;
  bool operator==(const PlayScript&) const = default;
};

/// Returns the text strictly between the first line containing the start marker and the
/// first later line containing the end marker. Unchanged when neither marker occurs.
RawDocument strip_boilerplate(const RawDocument& doc, const ParseRules& rules);

/// Deletes bracketed spans innermost-first until none remain. Brackets that cannot be
/// paired are left verbatim and reported through `unmatched`.
std::string remove_stage_directions(std::string_view text, const std::vector<BracketPair>& brackets,
                                    bool* unmatched = nullptr);

std::string normalize_speaker(std::string_view raw, const ParseRules& rules);

PlayScript parse_play(const RawDocument& doc, const ParseRules& rules, const PlayMeta& meta,
                      std::vector<std::string>* warnings = nullptr);

/// Speaker -> that speaker's turn texts in ordinal order, joined by single spaces.
std::map<std::string, std::string> extract_character_text(const PlayScript& play);

/// Interchange form: keys play_id, language, translator, turns[{speaker, text, ordinal}],
/// two-space indent, trailing LF.
std::string to_interchange_json(const PlayScript& play);
PlayScript from_interchange_json(std::string_view json);

}  // namespace idiolect
