#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "idiolect/corpus.hpp"
#include "idiolect/homogeneity.hpp"
#include "idiolect/segmentation.hpp"
#include "idiolect/similarity.hpp"
#include "idiolect/tokenization.hpp"

namespace idiolect {

struct CorpusEntry {
  std::filesystem::path path;  // absolute after loading a config file
  PlayMeta meta;
  ParseRules rules;
  /// Normalized speaker name -> canonical name, applied after parsing.
  std::map<std::string, std::string> speaker_aliases;
  bool latin1_fallback = false;
};

struct ExperimentConfig {
  std::string experiment_id;
  std::vector<CorpusEntry> corpus;
  LabelingMode labeling = LabelingMode::Character;
  std::vector<TokenizationMode> modes{TokenizationMode{}};
  std::size_t min_size = 10000;
  std::size_t chunk_count = 5;
  std::size_t chunk_size = 2000;
  std::size_t permutations = 10000;
  std::uint64_t seed = 42;
  double threshold = 0.05;
  Normalization normalization = Normalization::UnionSize;
  /// Restrict the analysis to these categories; empty keeps all.
  std::vector<std::string> include_categories;
  bool compare_translations = false;
  bool dump_tokens = false;

  // run-time only; not part of the echo since they cannot change results
  std::filesystem::path output_dir;
  unsigned jobs = 1;

  /// Throws Error(Config) when an invariant is violated.
  void validate() const;
};

/// Applies a JSON parse_rules object on top of `base`; unknown keys are config errors.
ParseRules parse_rules_json(const nlohmann::json& j, ParseRules base = {});

/// Parses the JSON config format. Relative corpus paths and output_dir resolve against
/// base_dir.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Config echo: everything that determines the results, in a form parse_config accepts.
nlohmann::ordered_json config_to_json(const ExperimentConfig& config);

/// Parsed corpus entry with parse warnings.
struct IngestedPlay {
  PlayScript play;
  std::vector<std::string> warnings;
};

IngestedPlay ingest(const CorpusEntry& entry);

struct ChunkingOptions {
  LabelingMode labeling = LabelingMode::Character;
  std::size_t min_size = 10000;
  std::size_t chunk_count = 5;
  std::size_t chunk_size = 2000;
  std::vector<std::string> include_categories;
};

struct ChunkSet {
  std::vector<Chunk> chunks;  // sorted by chunk_id
  std::vector<EligibilityEntry> eligibility;
  std::vector<std::string> warnings;
};

/// extract -> select_eligible -> chunk over several plays. Throws NoEligibleCharacters when
/// no play contributes an eligible character.
ChunkSet chunk_plays(const std::vector<PlayScript>& plays, const ChunkingOptions& options);

std::vector<TokenDistribution> tokenize_chunks(const std::vector<Chunk>& chunks,
                                               const TokenizationMode& mode, unsigned jobs = 1);

CategoryLabeling labeling_for(const std::vector<Chunk>& chunks);

struct CrossTranslationRow {
  std::string category;
  ChunkSource source;
  std::size_t chunks = 0;
  std::string counterpart;  // same play and speaker, other translator; empty when absent
  std::size_t nearest_counterpart = 0;
  std::size_t nearest_same_translator = 0;
  std::size_t nearest_other = 0;
  std::string majority_nearest;
};

struct CrossTranslationChunk {
  std::string chunk_id;
  std::string category;
  std::string nearest_foreign;
  double nearest_foreign_mean = 0;
  bool nearest_is_counterpart = false;
};

struct CrossTranslationTable {
  std::vector<CrossTranslationRow> rows;      // category order
  std::vector<CrossTranslationChunk> chunks;  // matrix order
};

/// For every chunk, the nearest category other than its own; aggregated per
/// translator-qualified character. Throws PreconditionFailed unless some play has chunks
/// from two or more translators.
CrossTranslationTable compare_translations(const DissimilarityMatrix<double>& matrix,
                                           const std::vector<Chunk>& chunks);

std::string cross_translation_csv(const CrossTranslationTable& table);
std::string cross_translation_chunks_csv(const CrossTranslationTable& table);

struct ModeResult {
  TokenizationMode mode;
  DissimilarityMatrix<double> matrix;
  HomogeneityAnalysis homogeneity;
  std::optional<CrossTranslationTable> cross_translation;
};

struct ExperimentReport {
  ExperimentConfig config;
  ChunkSet chunk_set;
  std::vector<ModeResult> modes;
  std::vector<std::string> warnings;
};

/// Runs the whole pipeline and writes its outputs to config.output_dir (when non-empty).
/// Errors carry the failing stage; outputs written before a failure are removed.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Only the in-memory part of run_experiment.
ExperimentReport compute_experiment(const ExperimentConfig& config);

/// Cross-translation tables for every configured mode; labeling is forced to
/// character_by_translator.
std::vector<CrossTranslationTable> compare_translations(const ExperimentConfig& config);

nlohmann::ordered_json homogeneity_report_json(const ExperimentReport& report, const ModeResult& mode);
nlohmann::ordered_json experiment_report_json(const ExperimentReport& report);
std::string attribution_csv(const ModeResult& mode, const CategoryLabeling& labeling);

/// Writes every output file; returns the paths written.
std::vector<std::filesystem::path> write_outputs(const ExperimentReport& report,
                                                 const std::filesystem::path& dir);

/// Plain-text table for a per-mode report JSON document.
std::string render_report_text(const nlohmann::json& report);

}  // namespace idiolect
