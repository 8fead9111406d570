// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "morphome/alphabet.hpp"
#include "morphome/combination.hpp"
#include "morphome/errors.hpp"
#include "morphome/paradigm.hpp"
#include "morphome/random.hpp"

namespace morphome {

// Type-frequency condition: the share of L-class verbs in the lexicon.
struct FrequencyCondition {
  std::string name;
  double l_fraction = 0.1;

  static FrequencyCondition c10l90nl() { return {"C10L90NL", 0.10}; }
  static FrequencyCondition c50l50nl() { return {"C50L50NL", 0.50}; }
  static FrequencyCondition c90l10nl() { return {"C90L10NL", 0.90}; }

  static FrequencyCondition custom(double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("l_fraction must lie in (0,1)");
    std::ostringstream os;
    os << "CUSTOM" << fraction;
    return {os.str(), fraction};
  }

  // Accepts "C10L90NL", "10L90NL", "10%L-90%NL" or a bare fraction "0.3".
  static FrequencyCondition parse(std::string s) {
    std::string compact;
    for (char c : s)
      if (c != '%' && c != '-' && c != ' ') compact += c;
    if (!compact.empty() && compact.front() != 'C') compact = "C" + compact;
    for (auto c : {c10l90nl(), c50l50nl(), c90l10nl()})
      if (c.name == compact) return c;
    try {
      std::size_t used = 0;
      double f = std::stod(s, &used);
      if (used == s.size()) return custom(f);
    } catch (const std::exception&) {
    }
    throw ConfigError("unknown frequency condition '" + s + "'");
  }

  // "10%L-90%NL"
  std::string label() const {
    const int l = static_cast<int>(std::lround(l_fraction * 100));
    return std::to_string(l) + "%L-" + std::to_string(100 - l) + "%NL";
  }
};

struct AlternationPair {
  std::string base;       // stem-final consonant in the NL cells
  std::string alternant;  // replacement in the L-pattern cells
};

// Template letters: C = consonant, V = vowel, O = onset cluster. The final
// letter must be C; for L-class verbs it is filled from an alternation pair.
struct LexiconSpec {
  std::size_t n_verbs = 658;
  std::vector<AlternationPair> alternation_pairs;
  std::vector<std::string> templates{"CVC", "CVCVC", "OVC", "OVCVC", "CVCVCVC"};
  std::vector<std::string> onset_clusters{"pɾ", "bɾ", "tɾ", "dɾ", "kɾ", "gɾ", "fɾ", "pl", "bl", "kl", "gl", "fl"};
  std::vector<std::string> consonants;  // empty: all alphabet consonants
  std::vector<std::string> finals;      // NL stem-final consonants; empty: `consonants`
  std::uint64_t rng_seed = 1;
  std::size_t max_attempts = 100000;
};

namespace detail {

inline Form draw_prefix(const std::string& tmpl, const std::vector<std::string>& consonants,
                        const std::vector<std::string>& vowels, const std::vector<Form>& clusters, Rng& rng) {
  Form out;
  for (std::size_t i = 0; i + 1 < tmpl.size(); ++i) {
    switch (tmpl[i]) {
      case 'C': out.push_back(consonants[uniform_index(rng, consonants.size())]); break;
      case 'V': out.push_back(vowels[uniform_index(rng, vowels.size())]); break;
      case 'O': {
        const Form& c = clusters[uniform_index(rng, clusters.size())];
        out.insert(out.end(), c.begin(), c.end());
        break;
      }
      default: throw ConfigError("lexicon template '" + tmpl + "': unknown letter");
    }
  }
  return out;
}

}  // namespace detail

// Nonce lexicon under a frequency condition. Class assignment and stem
// generation draw from separate seeded streams.
inline std::vector<Paradigm> generate_lexicon(const LexiconSpec& spec, const FrequencyCondition& cond,
                                              const Morphology& morph,
                                              const std::set<Form>& reserved_stems = {}) {
  if (spec.n_verbs < 2) throw ConfigError("generate_lexicon: n_verbs must be >= 2");
  if (!(cond.l_fraction > 0.0 && cond.l_fraction < 1.0)) throw ConfigError("l_fraction must lie in (0,1)");
  if (spec.templates.empty()) throw ConfigError("generate_lexicon: no templates");
  for (const auto& t : spec.templates)
    if (t.empty() || t.back() != 'C') throw ConfigError("lexicon template '" + t + "' must end in C");

  const Alphabet& ab = morph.alphabet;
  std::vector<std::string> consonants = spec.consonants.empty() ? ab.glyphs(SymbolClass::Consonant) : spec.consonants;
  std::vector<std::string> finals = spec.finals.empty() ? consonants : spec.finals;
  const std::vector<std::string> vowels = ab.glyphs(SymbolClass::Vowel);
  for (const auto& g : consonants)
    if (ab.at(g).cls != SymbolClass::Consonant) throw ConfigError("'" + g + "' is not a consonant");
  for (const auto& g : finals)
    if (ab.at(g).cls != SymbolClass::Consonant) throw ConfigError("'" + g + "' is not a consonant");
  std::vector<Form> clusters;
  for (const auto& c : spec.onset_clusters) clusters.push_back(ab.parse(c));

  std::set<std::pair<std::string, std::string>> seen_pairs;
  for (const auto& p : spec.alternation_pairs) {
    if (ab.at(p.base).cls != SymbolClass::Consonant || ab.at(p.alternant).cls != SymbolClass::Consonant)
      throw ConfigError("alternation pair " + p.base + "~" + p.alternant + " must join two consonants");
    if (p.base == p.alternant) throw ConfigError("alternation pair " + p.base + "~" + p.alternant + " is trivial");
    if (!seen_pairs.emplace(p.base, p.alternant).second)
      throw ConfigError("duplicate alternation pair " + p.base + "~" + p.alternant);
  }
  const std::size_t n_l = static_cast<std::size_t>(std::llround(cond.l_fraction * static_cast<double>(spec.n_verbs)));
  if (n_l > 0 && spec.alternation_pairs.empty()) throw ConfigError("L-class verbs requested but no alternation pairs");

  Rng class_rng(spec.rng_seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<std::size_t> order(spec.n_verbs);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle(order, class_rng);
  std::vector<bool> is_l(spec.n_verbs, false);
  for (std::size_t i = 0; i < n_l; ++i) is_l[order[i]] = true;

  Rng rng(spec.rng_seed);
  std::set<Form> used = reserved_stems;
  std::vector<Paradigm> lexicon;
  lexicon.reserve(spec.n_verbs);
  for (std::size_t v = 0; v < spec.n_verbs; ++v) {
    char id[16];
    std::snprintf(id, sizeof id, "v%04zu", v);
    bool placed = false;
    for (std::size_t attempt = 0; attempt < spec.max_attempts && !placed; ++attempt) {
      const std::string& tmpl = spec.templates[uniform_index(rng, spec.templates.size())];
      Form base = detail::draw_prefix(tmpl, consonants, vowels, clusters, rng);
      if (is_l[v]) {
        const auto& pair = spec.alternation_pairs[uniform_index(rng, spec.alternation_pairs.size())];
        Form alt = base;
        base.push_back(pair.base);
        alt.push_back(pair.alternant);
        if (used.contains(base) || used.contains(alt)) continue;
        used.insert(base);
        used.insert(alt);
        lexicon.push_back(build_paradigm(id, base, alt, ShapeClass::L, morph.suffixes));
      } else {
        base.push_back(finals[uniform_index(rng, finals.size())]);
        if (used.contains(base)) continue;
        used.insert(base);
        lexicon.push_back(build_paradigm(id, base, std::nullopt, ShapeClass::NL, morph.suffixes));
      }
      placed = true;
    }
    if (!placed)
      throw ExhaustedNamespace("generate_lexicon: could not draw a unique stem for verb " + std::to_string(v) +
                               " after " + std::to_string(spec.max_attempts) + " attempts");
  }
  return lexicon;
}

// For every target cell, every unordered pair of the remaining cells as
// sources, serialized in cell-list order: k * C(k-1, 2) combinations.
inline std::vector<Combination> enumerate_combinations(const Paradigm& p) {
  const std::size_t k = p.cells.size();
  if (k < 3) throw DataError("enumerate_combinations: paradigm " + p.lemma_id + " has fewer than 3 cells");
  std::vector<Combination> out;
  out.reserve(k * (k - 1) * (k - 2) / 2);
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t i = 0; i < k; ++i) {
      if (i == t) continue;
      for (std::size_t j = i + 1; j < k; ++j) {
        if (j == t) continue;
        out.push_back(Combination{{p.cells[i].second, p.cells[i].first},
                                  {p.cells[j].second, p.cells[j].first},
                                  p.cells[t].first,
                                  p.cells[t].second,
                                  p.lemma_id});
      }
    }
  }
  return out;
}

inline std::string tsv_line(const Combination& c, const Alphabet& alphabet) {
  std::string line;
  const auto in = encode_combination(c, alphabet);
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (i) line += ' ';
    line += in[i];
  }
  line += '\t';
  line += join(c.gold);
  return line;
}

inline Combination parse_tsv_line(const std::string& line, const Alphabet& alphabet) {
  const auto tab = line.find('\t');
  if (tab == std::string::npos) throw DataError("TSV line without TAB: " + line);
  const auto in = decode_tokens(split_ws(std::string_view(line).substr(0, tab)), alphabet);
  Form gold = split_ws(std::string_view(line).substr(tab + 1));
  alphabet.validate(gold);
  return Combination{in.src1, in.src2, in.target, std::move(gold), {}};
}

struct Manifest {
  std::uint64_t seed = 0;
  std::string condition;
  double l_fraction = 0;
  std::size_t n_verbs = 0;
  std::size_t n_l = 0;
  std::size_t n_nl = 0;
  std::size_t n_train = 0;
  std::size_t n_test_items = 0;
  std::string checksum;  // FNV-1a 64 of the train TSV bytes
  bool empty_lexicon = false;

  nlohmann::json to_json() const {
    return {{"seed", seed},         {"condition", condition}, {"l_fraction", l_fraction},
            {"n_verbs", n_verbs},   {"n_l", n_l},             {"n_nl", n_nl},
            {"n_train", n_train},   {"n_test_items", n_test_items},
            {"checksum", checksum}, {"empty_lexicon", empty_lexicon}};
  }
};

struct DataSplit {
  std::vector<Combination> train;
  std::vector<TestItem> test_items;
  Manifest manifest;
};

inline std::string train_tsv(const std::vector<Combination>& train, const Alphabet& alphabet) {
  std::string out;
  for (const auto& c : train) {
    out += tsv_line(c, alphabet);
    out += '\n';
  }
  return out;
}

inline DataSplit build_split(const std::vector<Paradigm>& lexicon, const std::vector<TestItem>& items,
                             const FrequencyCondition& cond, std::uint64_t seed, const Alphabet& alphabet) {
  std::set<Form> stems;
  for (const auto& p : lexicon) {
    stems.insert(p.base_stem);
    if (p.alternant_stem) stems.insert(*p.alternant_stem);
  }
  for (const auto& it : items) {
    if (stems.contains(it.l_stem) || stems.contains(it.nl_stem))
      throw OverlapError("test item " + it.item_id + " shares a stem with the training lexicon");
  }
  DataSplit split;
  for (const auto& p : lexicon) {
    auto combos = enumerate_combinations(p);
    split.train.insert(split.train.end(), std::make_move_iterator(combos.begin()),
                       std::make_move_iterator(combos.end()));
  }
  split.test_items = items;
  Manifest& m = split.manifest;
  m.seed = seed;
  m.condition = cond.name;
  m.l_fraction = cond.l_fraction;
  m.n_verbs = lexicon.size();
  for (const auto& p : lexicon) (p.shape == ShapeClass::L ? m.n_l : m.n_nl)++;
  m.n_train = split.train.size();
  m.n_test_items = items.size();
  m.empty_lexicon = lexicon.empty();
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(train_tsv(split.train, alphabet))));
  m.checksum = buf;
  return split;
}

}  // namespace morphome
