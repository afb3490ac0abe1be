#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "idiolect/error.hpp"
#include "idiolect/rng.hpp"
#include "json.hpp"

namespace idiolect::synthetic {

namespace {

using Turn = std::vector<std::string>;  // words, punctuation attached

char sample_letter(const LetterWeights& w, CounterStream& rng) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (u < w[i]) return static_cast<char>('a' + i);
    u -= w[i];
  }
  for (std::size_t i = w.size(); i-- > 0;) {
    if (w[i] > 0) return static_cast<char>('a' + i);
  }
  return 'a';
}

std::string random_word(const LetterWeights& w, CounterStream& rng) {
  const std::size_t length = 2 + static_cast<std::size_t>(rng.below(6));
  std::string word;
  for (std::size_t i = 0; i < length; ++i) word.push_back(sample_letter(w, rng));
  return word;
}

// Per-speaker vocabulary sampled with Zipf-like weights 1/(rank+1).
class Lexicon {
 public:
  Lexicon(const LetterWeights& w, std::size_t size, CounterStream& rng) {
    for (std::size_t i = 0; i < size; ++i) words_.push_back(random_word(w, rng));
    double acc = 0;
    for (std::size_t i = 0; i < size; ++i) {
      acc += 1.0 / static_cast<double>(i + 1);
      cumulative_.push_back(acc);
    }
  }

  const std::string& sample(CounterStream& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return words_[std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                        words_.size() - 1)];
  }

 private:
  std::vector<std::string> words_;
  std::vector<double> cumulative_;
};

std::size_t turn_length(const Turn& t) {
  std::size_t n = 0;
  for (const auto& w : t) n += w.size() + 1;
  return n;
}

struct Dialogue {
  std::vector<std::size_t> speaker;  // per turn
  std::vector<Turn> turns;
};

Dialogue generate(const ScriptSpec& spec) {
  CounterStream rng(spec.seed, 0);
  std::vector<Lexicon> lexicons;
  for (std::size_t s = 0; s < spec.speakers.size(); ++s) {
    CounterStream lex_rng(spec.seed, 1000 + s);
    lexicons.emplace_back(spec.speakers[s].weights, 400, lex_rng);
  }
  const Lexicon common(english_weights(), 40, rng);

  Dialogue d;
  std::vector<std::size_t> produced(spec.speakers.size(), 0);
  auto pending = [&] {
    for (std::size_t s = 0; s < spec.speakers.size(); ++s) {
      if (produced[s] < spec.speakers[s].target_chars) return true;
    }
    return false;
  };
  std::size_t next = 0;
  while (pending()) {
    const std::size_t s = next++ % spec.speakers.size();
    if (produced[s] >= spec.speakers[s].target_chars) continue;
    Turn turn;
    const std::size_t words = 6 + static_cast<std::size_t>(rng.below(13));
    std::size_t until_stop = 3 + static_cast<std::size_t>(rng.below(6));
    for (std::size_t i = 0; i < words; ++i) {
      std::string w = rng.uniform() < 0.25 ? common.sample(rng) : lexicons[s].sample(rng);
      if (i + 1 == words) {
        w += rng.uniform() < 0.2 ? "?" : ".";
      } else if (--until_stop == 0) {
        w += rng.uniform() < 0.5 ? "," : ".";
        until_stop = 3 + static_cast<std::size_t>(rng.below(6));
      }
      turn.push_back(std::move(w));
    }
    produced[s] += turn_length(turn);
    d.speaker.push_back(s);
    d.turns.push_back(std::move(turn));
  }
  return d;
}

std::string render(const ScriptSpec& spec, const Dialogue& d) {
  CounterStream rng(spec.seed, 7);
  std::string out = spec.title + "\n\nA play in one act. Synthetic text for testing.\n\n";
  if (spec.gutenberg_markers) out += "*** START OF THE PROJECT GUTENBERG EBOOK " + spec.title + " ***\n\n";
  out += "PERSONS OF THE PLAY\n";
  for (const auto& s : spec.speakers) out += "  " + s.heading + "\n";
  out += "\n[The scene is a plain room.]\n\n";
  for (std::size_t t = 0; t < d.turns.size(); ++t) {
    std::string line = spec.speakers[d.speaker[t]].heading + ".";
    std::size_t column = line.size();
    for (std::size_t i = 0; i < d.turns[t].size(); ++i) {
      std::string piece = d.turns[t][i];
      if (spec.stage_directions && i == 2 && rng.uniform() < 0.15) {
        piece = "(quietly, [almost] to herself) " + piece;
      }
      if (column + piece.size() + 1 > 70) {
        out += line + "\n";
        line = piece;
        column = piece.size();
      } else {
        line += " " + piece;
        column += piece.size() + 1;
      }
    }
    out += line + "\n";
    if (spec.stage_directions && rng.uniform() < 0.1) {
      out += "[" + spec.speakers[d.speaker[t]].heading + " goes to the window\nand looks out.]\n";
    }
    out += "\n";
  }
  if (spec.gutenberg_markers) {
    out += "*** END OF THE PROJECT GUTENBERG EBOOK " + spec.title + " ***\n\nLicense text.\n";
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
}

nlohmann::ordered_json corpus_entry(const std::string& path, const std::string& play_id,
                                    const std::string& translator) {
  nlohmann::ordered_json e;
  e["path"] = path;
  e["play_id"] = play_id;
  e["language"] = "synthetic";
  e["translator"] = translator;
  return e;
}

}  // namespace

LetterWeights english_weights() {
  return {8.2, 1.5, 2.8, 4.3, 12.7, 2.2, 2.0, 6.1, 7.0, 0.15, 0.77, 4.0, 2.4,
          6.7, 7.5, 1.9, 0.095, 6.0, 6.3, 9.1, 2.8, 0.98, 2.4, 0.15, 2.0, 0.074};
}

LetterWeights perturbed_weights(const LetterWeights& base, double strength, std::uint64_t seed) {
  CounterStream rng(seed, 99);
  LetterWeights out = base;
  for (auto& w : out) w *= std::exp(strength * (2.0 * rng.uniform() - 1.0));
  return out;
}

LetterWeights alphabet_range(char first, char last) {
  LetterWeights w{};
  for (char c = first; c <= last; ++c) w[static_cast<std::size_t>(c - 'a')] = 1.0;
  return w;
}

std::string make_script(const ScriptSpec& spec) { return render(spec, generate(spec)); }

std::pair<std::string, std::string> make_translation_pair(const ScriptSpec& spec, double noise,
                                                          std::uint64_t noise_seed) {
  const Dialogue a = generate(spec);
  Dialogue b = a;
  CounterStream rng(noise_seed, 0);
  const auto uniform = alphabet_range('a', 'z');
  for (auto& turn : b.turns) {
    for (auto& word : turn) {
      if (rng.uniform() < noise) {
        std::string punct;
        while (!word.empty() && !std::isalpha(static_cast<unsigned char>(word.back()))) {
          punct.insert(punct.begin(), word.back());
          word.pop_back();
        }
        word = random_word(uniform, rng) + punct;
      }
    }
  }
  return {render(spec, a), render(spec, b)};
}

void write_bundled_corpora(const std::filesystem::path& dir) {
  const auto english = english_weights();

  // two speakers with disjoint alphabets
  {
    ScriptSpec spec{"Disjoint", {{"ALPHA", alphabet_range('a', 'm'), 12000},
                                 {"BETA", alphabet_range('n', 'z'), 12000}}, 11};
    write_text(dir / "disjoint" / "disjoint.txt", make_script(spec));
    nlohmann::ordered_json c;
    c["experiment_id"] = "synthetic_disjoint";
    c["labeling"] = "character";
    c["modes"] = {"letter_unigram"};
    c["min_size"] = 10000;
    c["chunk_count"] = 10;
    c["chunk_size"] = 1000;
    c["permutations"] = 999;
    c["seed"] = 42;
    c["corpus"] = {corpus_entry("disjoint.txt", "disjoint", "original")};
    write_text(dir / "disjoint" / "config.json", c.dump(2) + "\n");
  }

  // one play, two translators; B is A with 10% word noise
  {
    ScriptSpec spec{"Revenants",
                    {{"HOLM", perturbed_weights(english, 0.8, 21), 11000},
                     {"VIK", perturbed_weights(english, 0.8, 22), 11000},
                     {"BERG", perturbed_weights(english, 0.8, 23), 11000}},
                    12};
    const auto [a, b] = make_translation_pair(spec, 0.10, 13);
    write_text(dir / "translation" / "revenants_a.txt", a);
    write_text(dir / "translation" / "revenants_b.txt", b);
    nlohmann::ordered_json c;
    c["experiment_id"] = "synthetic_translation";
    c["labeling"] = "character_by_translator";
    c["modes"] = {"letter_unigram", "word_unigram"};
    c["min_size"] = 10000;
    c["chunk_count"] = 5;
    c["chunk_size"] = 2000;
    c["permutations"] = 999;
    c["seed"] = 42;
    c["compare_translations"] = true;
    c["corpus"] = {corpus_entry("revenants_a.txt", "revenants", "a"),
                   corpus_entry("revenants_b.txt", "revenants", "b")};
    write_text(dir / "translation" / "config.json", c.dump(2) + "\n");
  }

  // two plays, four eligible characters and one minor one
  {
    ScriptSpec north{"North",
                     {{"ASTA", perturbed_weights(english, 0.5, 31), 10500},
                      {"BRAND", perturbed_weights(english, 0.5, 32), 10500},
                      {"CORA", perturbed_weights(english, 0.5, 33), 3000}},
                     14};
    ScriptSpec south{"South",
                     {{"DAG", perturbed_weights(english, 0.5, 34), 10500},
                      {"EIR", perturbed_weights(english, 0.5, 35), 10500}},
                     15};
    write_text(dir / "synthetic" / "north.txt", make_script(north));
    write_text(dir / "synthetic" / "south.txt", make_script(south));
    nlohmann::ordered_json c;
    c["experiment_id"] = "synthetic_two_plays";
    c["labeling"] = "character";
    c["modes"] = {"letter_unigram", "word_unigram"};
    c["min_size"] = 10000;
    c["chunk_count"] = 5;
    c["chunk_size"] = 2000;
    c["permutations"] = 2000;
    c["seed"] = 42;
    c["corpus"] = {corpus_entry("north.txt", "north", "original"),
                   corpus_entry("south.txt", "south", "original")};
    write_text(dir / "synthetic" / "config.json", c.dump(2) + "\n");
  }
}

}  // namespace idiolect::synthetic
