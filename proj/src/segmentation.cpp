#include "idiolect/segmentation.hpp"

#include <algorithm>
#include <cstdio>

#include "idiolect/csv.hpp"
#include "idiolect/error.hpp"
#include "idiolect/unicode.hpp"

namespace idiolect {

Eligibility select_eligible(const std::map<std::string, std::string>& char_texts,
                            std::size_t min_size) {
  if (min_size == 0) throw Error(ErrorKind::Config, "min_size must be positive");
  Eligibility out;
  for (const auto& [speaker, text] : char_texts) {
    const std::size_t length = unicode::length(text);
    const bool included = length >= min_size;
    out.log.push_back({speaker, length, included});
    if (included) out.eligible.emplace(speaker, text);
  }
  if (out.eligible.empty()) {
    throw Error(ErrorKind::NoEligibleCharacters,
                "no character has at least " + std::to_string(min_size) + " characters of dialogue");
  }
  return out;
}

std::vector<std::string> chunk_text(std::string_view text, std::size_t chunk_count,
                                    std::size_t chunk_size) {
  if (chunk_count < 2) throw Error(ErrorKind::Config, "chunk_count must be at least 2");
  if (chunk_size == 0) throw Error(ErrorKind::Config, "chunk_size must be positive");
  const std::u32string scalars = unicode::decode(text);
  if (scalars.size() < chunk_count * chunk_size) {
    throw Error(ErrorKind::InsufficientText,
                "text has " + std::to_string(scalars.size()) + " characters, need " +
                    std::to_string(chunk_count * chunk_size));
  }
  std::vector<std::string> chunks;
  chunks.reserve(chunk_count);
  for (std::size_t i = 0; i < chunk_count; ++i) {
    chunks.push_back(unicode::encode(std::u32string_view(scalars).substr(i * chunk_size, chunk_size)));
  }
  return chunks;
}

std::string_view to_string(LabelingMode mode) noexcept {
  switch (mode) {
    case LabelingMode::Character: return "character";
    case LabelingMode::Play: return "play";
    case LabelingMode::CharacterByTranslator: return "character_by_translator";
  }
  return "character";
}

LabelingMode parse_labeling_mode(std::string_view name) {
  if (name == "character") return LabelingMode::Character;
  if (name == "play") return LabelingMode::Play;
  if (name == "character_by_translator") return LabelingMode::CharacterByTranslator;
  throw Error(ErrorKind::Config, "unknown labeling mode '" + std::string(name) + "'");
}

std::string category_label(LabelingMode mode, const ChunkSource& source) {
  switch (mode) {
    case LabelingMode::Character: return source.play_id + "/" + source.speaker;
    case LabelingMode::Play: return source.play_id;
    case LabelingMode::CharacterByTranslator:
      return source.translator + "/" + source.play_id + "/" + source.speaker;
  }
  return {};
}

std::vector<Chunk> build_chunks(const std::vector<CharacterText>& characters, LabelingMode mode,
                                std::size_t chunk_count, std::size_t chunk_size) {
  std::vector<const CharacterText*> ordered;
  for (const auto& c : characters) ordered.push_back(&c);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto* a, const auto* b) { return a->source < b->source; });

  std::map<std::string, std::size_t> next_index;
  std::vector<Chunk> chunks;
  for (const auto* character : ordered) {
    const std::string category = category_label(mode, character->source);
    for (auto& piece : chunk_text(character->text, chunk_count, chunk_size)) {
      char index[16];
      std::snprintf(index, sizeof index, "%03zu", next_index[category]++);
      chunks.push_back({category + "#" + index, category, character->source, std::move(piece),
                        chunk_size});
    }
  }
  std::sort(chunks.begin(), chunks.end(),
            [](const Chunk& a, const Chunk& b) { return a.chunk_id < b.chunk_id; });
  for (std::size_t i = 1; i < chunks.size(); ++i) {
    if (chunks[i].chunk_id == chunks[i - 1].chunk_id) {
      throw Error(ErrorKind::Config, "duplicate chunk id " + chunks[i].chunk_id);
    }
  }
  return chunks;
}

std::string chunk_manifest_csv(std::vector<Chunk> chunks) {
  std::sort(chunks.begin(), chunks.end(),
            [](const Chunk& a, const Chunk& b) { return a.chunk_id < b.chunk_id; });
  std::string out =
      csv::row({"chunk_id", "category", "play_id", "translator", "speaker", "size_units"});
  for (const auto& c : chunks) {
    out += csv::row({c.chunk_id, c.category, c.source.play_id, c.source.translator,
                     c.source.speaker, std::to_string(c.size_units)});
  }
  return out;
}

}  // namespace idiolect
