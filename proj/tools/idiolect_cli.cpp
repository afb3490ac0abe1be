// idiolect: command-line front end.
//
//   idiolect parse  FILE [--play-id ID] [--language L] [--translator T] [--out FILE]
//   idiolect run    --config PATH [--seed N] [--permutations N] [--mode M] [--jobs N] [--out DIR]
//   idiolect matrix FILE... [--mode M] [--labeling L] [--min-size N] [--chunk-count N]
//                   [--chunk-size N] [--jobs N] [--out FILE] [--manifest FILE]
//   idiolect report REPORT.json
//
// Exit codes: 0 success, 2 config error, 3 corpus/parse error, 4 degenerate statistics.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>

#include "CLI11.hpp"
#include "idiolect/corpus.hpp"
#include "idiolect/error.hpp"
#include "idiolect/experiment.hpp"
#include "json.hpp"

namespace {

using namespace idiolect;

std::string read_file(const std::filesystem::path& path, ErrorKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(kind, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + out_path);
  out << content;
}

std::vector<TokenizationMode> parse_modes(const std::vector<std::string>& names) {
  std::vector<TokenizationMode> modes;
  for (const auto& name : names) {
    std::size_t start = 0;
    while (start <= name.size()) {
      const std::size_t comma = name.find(',', start);
      const auto piece = name.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!piece.empty()) modes.push_back(parse_tokenization_mode(piece));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return modes;
}

struct ParseArgs {
  std::string file;
  std::string play_id;
  std::string language = "unknown";
  std::string translator = "original";
  std::string rules;
  bool latin1 = false;
  bool uppercase_names = false;
  std::string out;
};

int cmd_parse(const ParseArgs& a) {
  ParseRules rules;
  if (!a.rules.empty()) {
    try {
      rules = parse_rules_json(nlohmann::json::parse(read_file(a.rules, ErrorKind::Config)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Config, a.rules + ": " + e.what());
    }
  }
  if (a.uppercase_names) rules.uppercase_names_only = true;
  PlayMeta meta{a.play_id.empty() ? std::filesystem::path(a.file).stem().string() : a.play_id,
                a.language, a.translator};
  const RawDocument doc = load_document(a.file, LoadOptions{a.latin1});
  std::vector<std::string> warnings;
  const PlayScript play = parse_play(strip_boilerplate(doc, rules), rules, meta, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  emit(to_interchange_json(play), a.out);
  return EXIT_SUCCESS;
}

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> permutations;
  std::vector<std::string> modes;
  unsigned jobs = 1;
  std::string out;
};

int cmd_run(const RunArgs& a) {
  ExperimentConfig config = load_config(a.config);
  if (a.seed) config.seed = *a.seed;
  if (a.permutations) config.permutations = *a.permutations;
  if (!a.modes.empty()) config.modes = parse_modes(a.modes);
  config.jobs = a.jobs;
  if (!a.out.empty()) config.output_dir = a.out;
  if (config.output_dir.empty()) config.output_dir = std::filesystem::path("out") / config.experiment_id;
  config.validate();

  const ExperimentReport report = run_experiment(config);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& m : report.modes) {
    std::cout << render_report_text(homogeneity_report_json(report, m)) << "\n";
  }
  std::cout << "outputs written to " << config.output_dir.string() << "\n";
  return EXIT_SUCCESS;
}

struct MatrixArgs {
  std::vector<std::string> files;
  std::vector<std::string> modes;
  std::string labeling = "character";
  std::size_t min_size = 10000;
  std::size_t chunk_count = 5;
  std::optional<std::size_t> chunk_size;
  unsigned jobs = 1;
  std::string out;
  std::string manifest;
};

int cmd_matrix(const MatrixArgs& a) {
  std::vector<PlayScript> plays;
  for (const auto& f : a.files) plays.push_back(from_interchange_json(read_file(f, ErrorKind::Io)));
  auto modes = parse_modes(a.modes);
  if (modes.empty()) modes.push_back(TokenizationMode{});
  if (modes.size() != 1) throw Error(ErrorKind::Config, "matrix takes exactly one --mode");
  ChunkingOptions options;
  options.labeling = parse_labeling_mode(a.labeling);
  options.min_size = a.min_size;
  options.chunk_count = a.chunk_count;
  options.chunk_size = a.chunk_size.value_or(a.min_size / std::max<std::size_t>(a.chunk_count, 1));
  if (options.chunk_count * options.chunk_size > options.min_size) {
    throw Error(ErrorKind::Config, "chunk_count x chunk_size must not exceed min_size");
  }
  const ChunkSet set = chunk_plays(plays, options);
  for (const auto& w : set.warnings) std::cerr << "warning: " << w << "\n";
  const auto dists = tokenize_chunks(set.chunks, modes.front(), a.jobs);
  const auto matrix = pairwise_matrix<double>(dists, Normalization::UnionSize, a.jobs);
  emit(matrix_csv(matrix), a.out);
  if (!a.manifest.empty()) emit(chunk_manifest_csv(set.chunks), a.manifest);
  return EXIT_SUCCESS;
}

int cmd_report(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path, ErrorKind::Io));
    std::cout << render_report_text(j);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedInput, path + ": " + e.what());
  }
  return EXIT_SUCCESS;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chunked chi-square stylometry for play scripts"};
  app.require_subcommand(1);

  ParseArgs parse_args;
  auto* parse = app.add_subcommand("parse", "Parse a play script into interchange JSON");
  parse->add_option("file", parse_args.file, "Plain-text play script")->required()->check(CLI::ExistingFile);
  parse->add_option("--play-id", parse_args.play_id, "Play id (default: file stem)");
  parse->add_option("--language", parse_args.language, "Language tag");
  parse->add_option("--translator", parse_args.translator, "Translator");
  parse->add_option("--rules", parse_args.rules, "JSON file with parse_rules overrides");
  parse->add_flag("--latin1", parse_args.latin1, "Transcode from Latin-1 when not valid UTF-8");
  parse->add_flag("--uppercase-names", parse_args.uppercase_names, "Only accept fully uppercase speaker names");
  parse->add_option("--out", parse_args.out, "Output file (default: stdout)");

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  run->add_option("--config", run_args.config, "Experiment config (JSON)")->required();
  run->add_option("--seed", run_args.seed, "Override the permutation seed");
  run->add_option("--permutations", run_args.permutations, "Override the permutation count");
  run->add_option("--mode", run_args.modes, "Tokenization mode(s), e.g. letter_unigram,word_unigram");
  run->add_option("--jobs", run_args.jobs, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--out", run_args.out, "Output directory");

  MatrixArgs matrix_args;
  auto* matrix = app.add_subcommand("matrix", "Dissimilarity matrix CSV from interchange files");
  matrix->add_option("files", matrix_args.files, "Interchange JSON files")->required()->check(CLI::ExistingFile);
  matrix->add_option("--mode", matrix_args.modes, "Tokenization mode");
  matrix->add_option("--labeling", matrix_args.labeling, "character | play | character_by_translator");
  matrix->add_option("--min-size", matrix_args.min_size, "Eligibility threshold in characters");
  matrix->add_option("--chunk-count", matrix_args.chunk_count, "Chunks per character");
  matrix->add_option("--chunk-size", matrix_args.chunk_size, "Characters per chunk");
  matrix->add_option("--jobs", matrix_args.jobs, "Worker threads")->check(CLI::PositiveNumber);
  matrix->add_option("--out", matrix_args.out, "Output CSV (default: stdout)");
  matrix->add_option("--manifest", matrix_args.manifest, "Also write the chunk manifest CSV here");

  std::string report_path;
  auto* report = app.add_subcommand("report", "Render a report JSON as a text table");
  report->add_option("report", report_path, "report_<mode>.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*parse) return cmd_parse(parse_args);
    if (*run) return cmd_run(run_args);
    if (*matrix) return cmd_matrix(matrix_args);
    if (*report) return cmd_report(report_path);
  } catch (const Error& e) {
    std::cerr << "error";
    if (!e.stage().empty()) std::cerr << " [" << e.stage() << "]";
    std::cerr << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
