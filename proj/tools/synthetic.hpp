#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

// Deterministic synthetic play scripts for tests and demos.
namespace idiolect::synthetic {

/// Relative letter weights over a..z.
using LetterWeights = std::array<double, 26>;

/// Rough English letter frequencies.
LetterWeights english_weights();

/// base perturbed by exp(strength * z) per letter, z uniform in [-1, 1) from the seed.
LetterWeights perturbed_weights(const LetterWeights& base, double strength, std::uint64_t seed);

/// Uniform weights over the letters [first, last].
LetterWeights alphabet_range(char first, char last);

struct Speaker {
  std::string heading;  // e.g. "ALPHA"
  LetterWeights weights;
  std::size_t target_chars = 12000;
};

struct ScriptSpec {
  std::string title;
  std::vector<Speaker> speakers;
  std::uint64_t seed = 1;
  bool gutenberg_markers = true;
  bool stage_directions = true;
};

/// A play script in the bundled format: title block, optional Gutenberg markers, uppercase
/// speaker headings, interleaved stage directions. Each speaker gets at least target_chars
/// of dialogue after stage-direction removal.
std::string make_script(const ScriptSpec& spec);

/// The same play in two "translations": B copies A's turns with each word replaced by a
/// random word with probability `noise`.
std::pair<std::string, std::string> make_translation_pair(const ScriptSpec& spec, double noise,
                                                          std::uint64_t noise_seed);

/// Writes the bundled corpora and their experiment configs under dir.
void write_bundled_corpora(const std::filesystem::path& dir);

}  // namespace idiolect::synthetic
