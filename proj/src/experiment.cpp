#include "idiolect/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include "idiolect/csv.hpp"
#include "idiolect/error.hpp"
#include "idiolect/parallel.hpp"
#include "idiolect/unicode.hpp"

namespace idiolect {

namespace {

using ordered_json = nlohmann::ordered_json;

template <typename F>
auto staged(const char* stage, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw e.with_stage(stage);
  }
}

void require_known_keys(const nlohmann::json& j, std::initializer_list<std::string_view> keys,
                        std::string_view where) {
  if (!j.is_object()) throw Error(ErrorKind::Config, std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw Error(ErrorKind::Config, "unknown key '" + key + "' in " + std::string(where));
    }
  }
}

ordered_json rules_to_json(const ParseRules& rules) {
  ordered_json j;
  j["max_name_words"] = rules.max_name_words;
  j["delimiters"] = rules.delimiters;
  auto brackets = ordered_json::array();
  for (const auto& b : rules.stage_direction_brackets) brackets.push_back({b.open, b.close});
  j["stage_direction_brackets"] = std::move(brackets);
  j["normalize_names"] = rules.normalize_names;
  j["uppercase_names_only"] = rules.uppercase_names_only;
  j["boilerplate_start"] = rules.boilerplate_start;
  j["boilerplate_end"] = rules.boilerplate_end;
  return j;
}

TokenizationMode parse_mode_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_tokenization_mode(j.get<std::string>());
  require_known_keys(j, {"kind", "n", "case_folding", "drop_non_letters"}, "mode");
  const auto kind = j.at("kind").get<std::string>();
  const bool ngram = kind.ends_with("_ngram");
  if (ngram && !j.contains("n")) throw Error(ErrorKind::Config, "mode " + kind + " needs n");
  TokenizationMode mode =
      parse_tokenization_mode(ngram ? kind + std::to_string(j["n"].get<std::size_t>()) : kind);
  if (j.contains("case_folding")) mode.case_folding = j["case_folding"].get<bool>();
  if (j.contains("drop_non_letters")) mode.drop_non_letters = j["drop_non_letters"].get<bool>();
  mode.validate();
  return mode;
}

std::string_view to_string(Normalization n) {
  return n == Normalization::UnionSize ? "union" : "union_minus_one";
}

void write_file(const std::filesystem::path& path, const std::string& content,
                std::vector<std::filesystem::path>& written) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  written.push_back(path);
  out << content;
  out.close();
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

ordered_json summary_json(const NullSummary& s) {
  ordered_json j;
  j["mean"] = s.mean;
  j["sd"] = s.sd;
  j["min"] = s.min;
  j["max"] = s.max;
  return j;
}

std::string matrix_file(const TokenizationMode& m) { return "matrix_" + m.name() + ".csv"; }
std::string attribution_file(const TokenizationMode& m) { return "attribution_" + m.name() + ".csv"; }
std::string report_file(const TokenizationMode& m) { return "report_" + m.name() + ".json"; }
std::string tokens_file(const TokenizationMode& m) { return "tokens_" + m.name() + ".csv"; }
std::string cross_file(const TokenizationMode& m) { return "cross_translation_" + m.name() + ".csv"; }
std::string cross_chunks_file(const TokenizationMode& m) {
  return "cross_translation_chunks_" + m.name() + ".csv";
}
constexpr const char* kManifestFile = "chunks.csv";

}  // namespace

ParseRules parse_rules_json(const nlohmann::json& j, ParseRules rules) {
  require_known_keys(j,
                     {"max_name_words", "delimiters", "stage_direction_brackets", "normalize_names",
                      "uppercase_names_only", "boilerplate_start", "boilerplate_end"},
                     "parse_rules");
  if (j.contains("max_name_words")) rules.max_name_words = j["max_name_words"].get<std::size_t>();
  if (j.contains("delimiters")) rules.delimiters = j["delimiters"].get<std::string>();
  if (j.contains("stage_direction_brackets")) {
    rules.stage_direction_brackets.clear();
    for (const auto& pair : j["stage_direction_brackets"]) {
      if (!pair.is_array() || pair.size() != 2) {
        throw Error(ErrorKind::Config, "stage_direction_brackets entries must be [open, close]");
      }
      rules.stage_direction_brackets.push_back({pair[0].get<std::string>(), pair[1].get<std::string>()});
    }
  }
  if (j.contains("normalize_names")) rules.normalize_names = j["normalize_names"].get<bool>();
  if (j.contains("uppercase_names_only")) {
    rules.uppercase_names_only = j["uppercase_names_only"].get<bool>();
  }
  if (j.contains("boilerplate_start")) rules.boilerplate_start = j["boilerplate_start"].get<std::string>();
  if (j.contains("boilerplate_end")) rules.boilerplate_end = j["boilerplate_end"].get<std::string>();
  return rules;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::Config, msg); };
  if (experiment_id.empty()) fail("experiment_id must be non-empty");
  if (corpus.empty()) fail("corpus must be non-empty");
  if (modes.empty()) fail("at least one tokenization mode is required");
  std::set<std::string> mode_names;
  for (const auto& m : modes) {
    m.validate();
    if (!mode_names.insert(m.name()).second) fail("duplicate mode " + m.name());
  }
  if (chunk_count < 2) fail("chunk_count must be at least 2");
  if (chunk_size == 0) fail("chunk_size must be positive");
  if (min_size == 0) fail("min_size must be positive");
  if (chunk_count * chunk_size > min_size) fail("chunk_count x chunk_size must not exceed min_size");
  if (permutations < 1) fail("permutations must be at least 1");
  if (!(threshold > 0 && threshold <= 1)) fail("threshold must lie in (0, 1]");
  std::set<std::tuple<std::string, std::string, std::string>> keys;
  for (const auto& e : corpus) {
    if (e.meta.play_id.empty()) fail("corpus entry without play_id: " + e.path.string());
    if (!keys.emplace(e.meta.play_id, e.meta.language, e.meta.translator).second) {
      fail("duplicate corpus entry for play " + e.meta.play_id + " (" + e.meta.language + ", " +
           e.meta.translator + ")");
    }
    e.rules.validate();
  }
  if (compare_translations && labeling != LabelingMode::CharacterByTranslator) {
    fail("compare_translations requires labeling character_by_translator");
  }
}

ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  try {
    require_known_keys(j,
                       {"experiment_id", "corpus", "labeling", "modes", "min_size", "chunk_count",
                        "chunk_size", "permutations", "seed", "threshold", "normalization",
                        "include_categories", "compare_translations", "dump_tokens", "parse_rules",
                        "output_dir", "jobs"},
                       "config");
    ExperimentConfig c;
    c.experiment_id = j.at("experiment_id").get<std::string>();
    if (j.contains("labeling")) c.labeling = parse_labeling_mode(j["labeling"].get<std::string>());
    if (j.contains("modes")) {
      c.modes.clear();
      for (const auto& m : j["modes"]) c.modes.push_back(parse_mode_json(m));
    }
    if (j.contains("min_size")) c.min_size = j["min_size"].get<std::size_t>();
    if (j.contains("chunk_count")) c.chunk_count = j["chunk_count"].get<std::size_t>();
    if (j.contains("chunk_size")) {
      c.chunk_size = j["chunk_size"].get<std::size_t>();
    } else {
      c.chunk_size = c.min_size / std::max<std::size_t>(c.chunk_count, 1);
    }
    if (j.contains("permutations")) c.permutations = j["permutations"].get<std::size_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threshold")) c.threshold = j["threshold"].get<double>();
    if (j.contains("normalization")) {
      const auto n = j["normalization"].get<std::string>();
      if (n == "union") {
        c.normalization = Normalization::UnionSize;
      } else if (n == "union_minus_one") {
        c.normalization = Normalization::UnionSizeMinusOne;
      } else {
        throw Error(ErrorKind::Config, "normalization must be 'union' or 'union_minus_one'");
      }
    }
    if (j.contains("include_categories")) {
      c.include_categories = j["include_categories"].get<std::vector<std::string>>();
    }
    if (j.contains("compare_translations")) c.compare_translations = j["compare_translations"].get<bool>();
    if (j.contains("dump_tokens")) c.dump_tokens = j["dump_tokens"].get<bool>();
    if (j.contains("output_dir")) {
      c.output_dir = (base_dir / j["output_dir"].get<std::string>()).lexically_normal();
    }
    if (j.contains("jobs")) c.jobs = j["jobs"].get<unsigned>();

    const ParseRules shared = j.contains("parse_rules") ? parse_rules_json(j["parse_rules"], ParseRules{})
                                                        : ParseRules{};
    for (const auto& e : j.at("corpus")) {
      require_known_keys(e,
                         {"path", "play_id", "language", "translator", "parse_rules",
                          "speaker_aliases", "latin1"},
                         "corpus entry");
      CorpusEntry entry;
      entry.path = (base_dir / e.at("path").get<std::string>()).lexically_normal();
      entry.meta.play_id = e.at("play_id").get<std::string>();
      entry.meta.language = e.value("language", std::string{});
      entry.meta.translator = e.value("translator", std::string{"original"});
      entry.rules = e.contains("parse_rules") ? parse_rules_json(e["parse_rules"], shared) : shared;
      if (e.contains("speaker_aliases")) {
        entry.speaker_aliases = e["speaker_aliases"].get<std::map<std::string, std::string>>();
      }
      entry.latin1_fallback = e.value("latin1", false);
      c.corpus.push_back(std::move(entry));
    }
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Config, "cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, path.string() + ": " + e.what());
  }
  return parse_config(j, std::filesystem::absolute(path).parent_path());
}

ordered_json config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["experiment_id"] = c.experiment_id;
  j["labeling"] = std::string(to_string(c.labeling));
  auto modes = ordered_json::array();
  for (const auto& m : c.modes) modes.push_back(m.name());
  j["modes"] = std::move(modes);
  j["min_size"] = c.min_size;
  j["chunk_count"] = c.chunk_count;
  j["chunk_size"] = c.chunk_size;
  j["permutations"] = c.permutations;
  j["seed"] = c.seed;
  j["threshold"] = c.threshold;
  j["normalization"] = std::string(to_string(c.normalization));
  j["include_categories"] = c.include_categories;
  j["compare_translations"] = c.compare_translations;
  j["dump_tokens"] = c.dump_tokens;
  auto corpus = ordered_json::array();
  for (const auto& e : c.corpus) {
    ordered_json entry;
    entry["path"] = e.path.generic_string();
    entry["play_id"] = e.meta.play_id;
    entry["language"] = e.meta.language;
    entry["translator"] = e.meta.translator;
    entry["parse_rules"] = rules_to_json(e.rules);
    ordered_json aliases = ordered_json::object();
    for (const auto& [from, to] : e.speaker_aliases) aliases[from] = to;
    entry["speaker_aliases"] = std::move(aliases);
    entry["latin1"] = e.latin1_fallback;
    corpus.push_back(std::move(entry));
  }
  j["corpus"] = std::move(corpus);
  return j;
}

IngestedPlay ingest(const CorpusEntry& entry) {
  IngestedPlay out;
  const RawDocument doc = load_document(entry.path, LoadOptions{entry.latin1_fallback});
  const RawDocument body = strip_boilerplate(doc, entry.rules);
  out.play = parse_play(body, entry.rules, entry.meta, &out.warnings);
  if (!entry.speaker_aliases.empty()) {
    for (auto& turn : out.play.turns) {
      if (const auto it = entry.speaker_aliases.find(turn.speaker); it != entry.speaker_aliases.end()) {
        turn.speaker = it->second;
      }
    }
  }
  return out;
}

ChunkSet chunk_plays(const std::vector<PlayScript>& plays, const ChunkingOptions& options) {
  ChunkSet out;
  std::vector<CharacterText> characters;
  for (const auto& play : plays) {
    const auto texts = extract_character_text(play);
    Eligibility eligibility;
    try {
      eligibility = select_eligible(texts, options.min_size);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoEligibleCharacters) throw;
      for (const auto& [speaker, text] : texts) {
        eligibility.log.push_back({speaker, unicode::length(text), false});
      }
    }
    for (const auto& entry : eligibility.log) {
      if (!entry.included) {
        out.warnings.push_back("excluded " + play.play_id + " (" + play.translator + ")/" +
                               entry.speaker + ": " + std::to_string(entry.length) + " < " +
                               std::to_string(options.min_size) + " characters");
      }
      out.eligibility.push_back(entry);
    }
    for (auto& [speaker, text] : eligibility.eligible) {
      characters.push_back({{play.play_id, play.translator, speaker}, std::move(text)});
    }
  }
  if (characters.empty()) {
    throw Error(ErrorKind::NoEligibleCharacters,
                "no character in the corpus has at least " + std::to_string(options.min_size) +
                    " characters of dialogue");
  }
  out.chunks = build_chunks(characters, options.labeling, options.chunk_count, options.chunk_size);
  if (!options.include_categories.empty()) {
    const std::set<std::string> keep(options.include_categories.begin(), options.include_categories.end());
    std::erase_if(out.chunks, [&](const Chunk& c) { return !keep.contains(c.category); });
  }
  return out;
}

std::vector<TokenDistribution> tokenize_chunks(const std::vector<Chunk>& chunks,
                                               const TokenizationMode& mode, unsigned jobs) {
  std::vector<TokenDistribution> out(chunks.size());
  parallel_for(chunks.size(), jobs,
               [&](std::size_t i) { out[i] = tokenize(chunks[i].text, mode, chunks[i].chunk_id); });
  return out;
}

CategoryLabeling labeling_for(const std::vector<Chunk>& chunks) {
  std::vector<std::string> labels;
  labels.reserve(chunks.size());
  for (const auto& c : chunks) labels.push_back(c.category);
  return CategoryLabeling::from_labels(labels);
}

CrossTranslationTable compare_translations(const DissimilarityMatrix<double>& matrix,
                                           const std::vector<Chunk>& chunks) {
  std::map<std::string, std::set<std::string>> translators_by_play;
  for (const auto& c : chunks) translators_by_play[c.source.play_id].insert(c.source.translator);
  if (std::none_of(translators_by_play.begin(), translators_by_play.end(),
                   [](const auto& kv) { return kv.second.size() >= 2; })) {
    throw Error(ErrorKind::PreconditionFailed, "two translators of the same play required");
  }
  if (static_cast<std::size_t>(matrix.size()) != chunks.size()) {
    throw Error(ErrorKind::PreconditionFailed, "matrix does not match chunk list");
  }
  const CategoryLabeling labeling = labeling_for(chunks);
  const std::size_t k = labeling.categories.size();
  if (k < 2) throw Error(ErrorKind::DegenerateCategory, "need at least 2 categories");

  std::vector<ChunkSource> source_of(k);
  for (const auto& c : chunks) source_of[labeling.index_of(c.category)] = c.source;
  auto is_counterpart = [&](std::size_t a, std::size_t b) {
    return a != b && source_of[a].play_id == source_of[b].play_id &&
           source_of[a].speaker == source_of[b].speaker &&
           source_of[a].translator != source_of[b].translator;
  };

  CrossTranslationTable table;
  std::vector<std::map<std::string, std::size_t>> votes(k);
  table.rows.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    auto& row = table.rows[c];
    row.category = labeling.categories[c];
    row.source = source_of[c];
    for (std::size_t o = 0; o < k; ++o) {
      if (is_counterpart(c, o)) {
        row.counterpart = labeling.categories[o];
        break;
      }
    }
  }

  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (matrix.chunk_ids[i] != chunks[i].chunk_id) {
      throw Error(ErrorKind::PreconditionFailed, "matrix order does not match chunk order");
    }
    const std::size_t own = labeling.chunk_category[i];
    std::vector<double> sums(k, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t j = 0; j < chunks.size(); ++j) {
      if (j == i) continue;
      sums[labeling.chunk_category[j]] += matrix.scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      ++counts[labeling.chunk_category[j]];
    }
    std::size_t best = k;
    double best_mean = 0;
    for (std::size_t c = 0; c < k; ++c) {
      if (c == own || counts[c] == 0) continue;
      const double mean = sums[c] / static_cast<double>(counts[c]);
      if (best == k || mean < best_mean) {
        best = c;
        best_mean = mean;
      }
    }
    auto& row = table.rows[own];
    ++row.chunks;
    const bool counterpart = is_counterpart(own, best);
    if (counterpart) {
      ++row.nearest_counterpart;
    } else if (source_of[best].translator == source_of[own].translator) {
      ++row.nearest_same_translator;
    } else {
      ++row.nearest_other;
    }
    ++votes[own][labeling.categories[best]];
    table.chunks.push_back({chunks[i].chunk_id, chunks[i].category, labeling.categories[best],
                            best_mean, counterpart});
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t top = 0;
    for (const auto& [category, n] : votes[c]) {
      if (n > top) {
        top = n;
        table.rows[c].majority_nearest = category;
      }
    }
  }
  return table;
}

std::string cross_translation_csv(const CrossTranslationTable& table) {
  std::string out = csv::row({"category", "translator", "play_id", "speaker", "chunks", "counterpart",
                              "nearest_counterpart", "nearest_same_translator", "nearest_other",
                              "majority_nearest"});
  for (const auto& r : table.rows) {
    out += csv::row({r.category, r.source.translator, r.source.play_id, r.source.speaker,
                     std::to_string(r.chunks), r.counterpart, std::to_string(r.nearest_counterpart),
                     std::to_string(r.nearest_same_translator), std::to_string(r.nearest_other),
                     r.majority_nearest});
  }
  return out;
}

std::string cross_translation_chunks_csv(const CrossTranslationTable& table) {
  std::string out = csv::row({"chunk_id", "category", "nearest_foreign", "nearest_foreign_mean",
                              "nearest_is_counterpart"});
  for (const auto& c : table.chunks) {
    out += csv::row({c.chunk_id, c.category, c.nearest_foreign, format_fixed6(c.nearest_foreign_mean),
                     c.nearest_is_counterpart ? "1" : "0"});
  }
  return out;
}

ExperimentReport compute_experiment(const ExperimentConfig& config) {
  staged("config", [&] { config.validate(); });
  ExperimentReport report;
  report.config = config;

  const auto plays = staged("ingest", [&] {
    std::vector<PlayScript> out;
    for (const auto& entry : config.corpus) {
      auto ingested = ingest(entry);
      for (auto& w : ingested.warnings) report.warnings.push_back(std::move(w));
      out.push_back(std::move(ingested.play));
    }
    return out;
  });

  report.chunk_set = staged("segmentation", [&] {
    return chunk_plays(plays, {config.labeling, config.min_size, config.chunk_count,
                               config.chunk_size, config.include_categories});
  });
  report.warnings.insert(report.warnings.end(), report.chunk_set.warnings.begin(),
                         report.chunk_set.warnings.end());
  const auto& chunks = report.chunk_set.chunks;
  const CategoryLabeling labeling = staged("homogeneity", [&] {
    auto l = labeling_for(chunks);
    l.require_analysable();
    return l;
  });

  for (const auto& mode : config.modes) {
    ModeResult result;
    result.mode = mode;
    const auto dists = staged("tokenization", [&] { return tokenize_chunks(chunks, mode, config.jobs); });
    result.matrix = staged("similarity", [&] {
      return pairwise_matrix<double>(dists, config.normalization, config.jobs);
    });
    result.homogeneity = staged("homogeneity", [&] {
      return analyse_homogeneity(result.matrix, labeling,
                                 {config.permutations, config.seed, config.threshold, config.jobs});
    });
    report.warnings.insert(report.warnings.end(), result.homogeneity.attribution.ties_logged.begin(),
                           result.homogeneity.attribution.ties_logged.end());
    if (config.compare_translations) {
      result.cross_translation =
          staged("translation", [&] { return compare_translations(result.matrix, chunks); });
    }
    report.modes.push_back(std::move(result));
  }
  return report;
}

std::vector<CrossTranslationTable> compare_translations(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.labeling = LabelingMode::CharacterByTranslator;
  c.compare_translations = true;
  const auto report = compute_experiment(c);
  std::vector<CrossTranslationTable> out;
  for (const auto& m : report.modes) out.push_back(*m.cross_translation);
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  ExperimentReport report = compute_experiment(config);
  if (!config.output_dir.empty()) staged("output", [&] { write_outputs(report, config.output_dir); });
  return report;
}

ordered_json homogeneity_report_json(const ExperimentReport& report, const ModeResult& mode) {
  const auto& c = report.config;
  ordered_json j;
  j["experiment_id"] = c.experiment_id;
  j["mode"] = mode.mode.name();
  j["chunk_manifest_ref"] = kManifestFile;
  auto categories = ordered_json::array();
  for (const auto& r : mode.homogeneity.reports) {
    ordered_json e;
    e["category"] = r.category;
    e["rank_sum"] = r.rank_sum;
    e["rank_sum_p"] = r.rank_sum_p;
    e["attribution_hits"] = r.attribution_hits;
    e["attribution_total"] = r.attribution_total;
    e["attribution_p"] = r.attribution_p;
    e["permutations"] = r.permutations;
    e["seed"] = r.seed;
    e["chunks"] = r.chunks;
    e["rank_sum_bounds"] = {r.rank_sum_min, r.rank_sum_max};
    e["rank_sum_significant"] = r.rank_sum_significant;
    e["attribution_significant"] = r.attribution_significant;
    e["rank_sum_null"] = summary_json(r.rank_sum_null);
    e["attribution_null"] = summary_json(r.attribution_null);
    categories.push_back(std::move(e));
  }
  j["categories"] = std::move(categories);
  j["ties_logged"] = mode.homogeneity.attribution.ties_logged;
  ordered_json settings;
  settings["permutations"] = c.permutations;
  settings["seed"] = c.seed;
  settings["threshold"] = c.threshold;
  j["settings"] = std::move(settings);
  j["labeling"] = std::string(to_string(c.labeling));
  j["normalization"] = std::string(to_string(c.normalization));
  j["matrix_ref"] = matrix_file(mode.mode);
  j["attribution_ref"] = attribution_file(mode.mode);
  const auto& pooled = mode.homogeneity.pooled_rank_sum;
  ordered_json p;
  p["rank_sum"] = pooled.observed;
  p["p"] = pooled.p_value;
  p["null"] = summary_json(pooled.null);
  j["pooled_rank_sum"] = std::move(p);
  if (mode.cross_translation) {
    j["cross_translation_ref"] = cross_file(mode.mode);
  }
  return j;
}

ordered_json experiment_report_json(const ExperimentReport& report) {
  ordered_json j;
  j["experiment_id"] = report.config.experiment_id;
  j["config"] = config_to_json(report.config);
  j["chunk_manifest_ref"] = kManifestFile;
  auto modes = ordered_json::array();
  for (const auto& m : report.modes) {
    ordered_json e;
    e["mode"] = m.mode.name();
    e["report_ref"] = report_file(m.mode);
    e["matrix_ref"] = matrix_file(m.mode);
    e["attribution_ref"] = attribution_file(m.mode);
    modes.push_back(std::move(e));
  }
  j["modes"] = std::move(modes);
  auto eligibility = ordered_json::array();
  for (const auto& e : report.chunk_set.eligibility) {
    ordered_json x;
    x["speaker"] = e.speaker;
    x["length"] = e.length;
    x["included"] = e.included;
    eligibility.push_back(std::move(x));
  }
  j["eligibility"] = std::move(eligibility);
  j["warnings"] = report.warnings;
  return j;
}

std::string attribution_csv(const ModeResult& mode, const CategoryLabeling& labeling) {
  std::vector<std::string> header{"chunk_id", "category", "attributed", "hit", "tie"};
  for (const auto& c : labeling.categories) header.push_back("mean:" + c);
  std::string out = csv::row(header);
  for (const auto& a : mode.homogeneity.attribution.chunks) {
    std::vector<std::string> fields{mode.matrix.chunk_ids[a.chunk], labeling.categories[a.true_category],
                                    labeling.categories[a.attributed], a.hit() ? "1" : "0",
                                    a.tie ? "1" : "0"};
    for (double m : a.mean_dissimilarity) fields.push_back(format_fixed6(m));
    out += csv::row(fields);
  }
  return out;
}

std::vector<std::filesystem::path> write_outputs(const ExperimentReport& report,
                                                 const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  try {
    std::filesystem::create_directories(dir);
    const auto& chunks = report.chunk_set.chunks;
    const CategoryLabeling labeling = labeling_for(chunks);
    write_file(dir / kManifestFile, chunk_manifest_csv(chunks), written);
    for (const auto& m : report.modes) {
      write_file(dir / matrix_file(m.mode), matrix_csv(m.matrix), written);
      write_file(dir / attribution_file(m.mode), attribution_csv(m, labeling), written);
      write_file(dir / report_file(m.mode), homogeneity_report_json(report, m).dump(2) + "\n", written);
      if (m.cross_translation) {
        write_file(dir / cross_file(m.mode), cross_translation_csv(*m.cross_translation), written);
        write_file(dir / cross_chunks_file(m.mode), cross_translation_chunks_csv(*m.cross_translation),
                   written);
      }
      if (report.config.dump_tokens) {
        write_file(dir / tokens_file(m.mode),
                   token_dump_csv(tokenize_chunks(chunks, m.mode, report.config.jobs)), written);
      }
    }
    write_file(dir / "experiment_report.json", experiment_report_json(report).dump(2) + "\n", written);

    // the only non-deterministic output, kept apart from the hashed content
    ordered_json info;
    const auto now = std::chrono::system_clock::now();
    info["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    info["jobs"] = report.config.jobs;
    info["output_dir"] = dir.generic_string();
    write_file(dir / "run_info.json", info.dump(2) + "\n", written);
  } catch (...) {
    for (const auto& p : written) {
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }
    throw;
  }
  return written;
}

std::string render_report_text(const nlohmann::json& report) {
  std::ostringstream out;
  out << "experiment " << report.value("experiment_id", std::string{}) << "  mode "
      << report.value("mode", std::string{}) << "\n";
  const auto& s = report.at("settings");
  const double threshold = s.at("threshold").get<double>();
  out << "permutations " << s.at("permutations").get<std::size_t>() << "  seed "
      << s.at("seed").get<std::uint64_t>() << "  threshold " << threshold << "\n\n";

  std::size_t width = 8;
  for (const auto& c : report.at("categories")) {
    width = std::max(width, c.at("category").get<std::string>().size());
  }
  char line[512];
  std::snprintf(line, sizeof line, "%-*s %10s %10s %6s %10s %6s\n", static_cast<int>(width),
                "category", "rank_sum", "p", "", "hits", "p");
  out << line;
  for (const auto& c : report.at("categories")) {
    const double rp = c.at("rank_sum_p").get<double>();
    const double ap = c.at("attribution_p").get<double>();
    const std::string hits = std::to_string(c.at("attribution_hits").get<std::size_t>()) + "/" +
                             std::to_string(c.at("attribution_total").get<std::size_t>());
    std::snprintf(line, sizeof line, "%-*s %10.1f %10.4f %6s %10s %6.4f%s\n", static_cast<int>(width),
                  c.at("category").get<std::string>().c_str(), c.at("rank_sum").get<double>(), rp,
                  rp <= threshold ? "*" : "", hits.c_str(), ap, ap <= threshold ? " *" : "");
    out << line;
  }
  if (report.contains("pooled_rank_sum")) {
    const auto& p = report["pooled_rank_sum"];
    out << "\npooled within-category rank sum " << p.at("rank_sum").get<double>() << "  p "
        << p.at("p").get<double>() << "\n";
  }
  const auto& ties = report.at("ties_logged");
  if (!ties.empty()) {
    out << "\nties:\n";
    for (const auto& t : ties) out << "  " << t.get<std::string>() << "\n";
  }
  out << "\n* p <= threshold (homogeneous); no multiple-comparison correction applied\n";
  return out.str();
}

}  // namespace idiolect
