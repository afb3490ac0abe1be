#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace idiolect {

struct EligibilityEntry {
  std::string speaker;
  std::size_t length = 0;  // Unicode scalar values
  bool included = false;
};

struct Eligibility {
  std::map<std::string, std::string> eligible;
  std::vector<EligibilityEntry> log;
};

/// Keeps speakers whose dialogue has at least min_size characters (scalar values, spaces
/// included). Throws NoEligibleCharacters when nothing survives.
Eligibility select_eligible(const std::map<std::string, std::string>& char_texts, std::size_t min_size);

/// Exactly chunk_count consecutive slices of chunk_size characters from offset 0; the
/// tail is discarded. Throws InsufficientText when the text is too short.
std::vector<std::string> chunk_text(std::string_view text, std::size_t chunk_count,
                                    std::size_t chunk_size);

enum class LabelingMode { Character, Play, CharacterByTranslator };

std::string_view to_string(LabelingMode mode) noexcept;
LabelingMode parse_labeling_mode(std::string_view name);

struct ChunkSource {
  std::string play_id;
  std::string translator;
  std::string speaker;
  auto operator<=>(const ChunkSource&) const = default;
};

/// character: "play/speaker"; play: "play"; character_by_translator: "translator/play/speaker".
std::string category_label(LabelingMode mode, const ChunkSource& source);

struct Chunk {
  std::string chunk_id;
  std::string category;
  ChunkSource source;
  std::string text;
  std::size_t size_units = 0;
};

struct CharacterText {
  ChunkSource source;
  std::string text;
};

/// Chunks every character and labels the result. Chunk ids are "<category>#<index>" with a
/// zero-padded per-category index; the result is sorted by chunk_id.
std::vector<Chunk> build_chunks(const std::vector<CharacterText>& characters, LabelingMode mode,
                                std::size_t chunk_count, std::size_t chunk_size);

/// Columns chunk_id, category, play_id, translator, speaker, size_units; rows sorted by chunk_id.
std::string chunk_manifest_csv(std::vector<Chunk> chunks);

}  // namespace idiolect
