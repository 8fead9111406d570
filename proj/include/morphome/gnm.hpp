// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Generalized Neighborhood Model wordlikeness: an item's similarity to a
// lexicon is the weighted sum of exp(-d / s) over lexicon entries, with d a
// weighted phoneme edit distance.

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "morphome/alphabet.hpp"
#include "morphome/combination.hpp"
#include "morphome/errors.hpp"

namespace morphome {

inline constexpr const char* kGnmDelimiter = "#";

struct EditCosts {
  double insert = 1.0;
  double remove = 1.0;
  double substitute = 1.0;  // default for pairs not listed
  std::map<std::pair<std::string, std::string>, double> pairs;

  double sub(const std::string& a, const std::string& b) const {
    if (a == b) return 0.0;
    if (auto it = pairs.find({a, b}); it != pairs.end()) return it->second;
    return substitute;
  }

  void validate() const {
    if (insert < 0 || remove < 0 || substitute < 0) throw ConfigError("edit costs must be >= 0");
    for (const auto& [k, v] : pairs) {
      if (v < 0) throw ConfigError("edit cost " + k.first + "/" + k.second + " is negative");
      if (k.first == k.second && v != 0) throw ConfigError("edit cost of identical symbols must be 0");
    }
  }

  // Whitespace-separated "a b cost" lines, "-" standing for the empty side
  // of an insertion or deletion; "//" starts a comment line. Substitution
  // pairs are entered in both directions.
  static EditCosts load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open cost matrix " + path);
    EditCosts c;
    std::string line;
    while (std::getline(in, line)) {
      auto f = split_ws(line);
      if (f.empty() || f[0].starts_with("//")) continue;
      if (f.size() != 3) throw ConfigError("cost matrix: malformed line '" + line + "'");
      const double v = std::stod(f[2]);
      if (f[0] == "-" && f[1] == "-") throw ConfigError("cost matrix: '- -' is not a cost");
      if (f[0] == "-") c.insert = v;
      else if (f[1] == "-") c.remove = v;
      else {
        c.pairs[{f[0], f[1]}] = v;
        c.pairs[{f[1], f[0]}] = v;
      }
    }
    c.validate();
    return c;
  }
};

// Minimum-cost alignment of a onto b (deleting from a, inserting from b).
inline double weighted_edit_distance(const Form& a, const Form& b, const EditCosts& c = {}) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<double> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<double>(j) * c.insert;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<double>(i) * c.remove;
    for (std::size_t j = 1; j <= m; ++j) {
      cur[j] = std::min({prev[j] + c.remove, cur[j - 1] + c.insert, prev[j - 1] + c.sub(a[i - 1], b[j - 1])});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

struct LexiconEntry {
  Form form;  // base, "#", alternant
  double weight = 1.0;
};

struct GnmParams {
  double sensitivity = 0.3;
  EditCosts costs;

  void validate() const {
    if (!(sensitivity > 0)) throw ConfigError("GNM sensitivity must be positive");
    costs.validate();
  }
};

struct WordlikenessScore {
  std::string item_id;
  double raw = 0;
  double log10_raw = 0;
};

// "base#alternant" with the delimiter as its own symbol.
inline Form delimited_form(const Form& base, const Form& alternant) {
  Form f = base;
  f.push_back(kGnmDelimiter);
  f.insert(f.end(), alternant.begin(), alternant.end());
  return f;
}

inline Form parse_delimited(const std::string& text, const Alphabet& ab) {
  const auto hash = text.find('#');
  if (hash == std::string::npos || text.find('#', hash + 1) != std::string::npos)
    throw DataError("lexicon entry '" + text + "' must contain exactly one '#'");
  auto trim = [](std::string s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.pop_back();
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    return s;
  };
  const std::string base = trim(text.substr(0, hash)), alt = trim(text.substr(hash + 1));
  if (base.empty() || alt.empty()) throw DataError("lexicon entry '" + text + "' has an empty side");
  return delimited_form(ab.parse(base), ab.parse(alt));
}

// UTF-8, one "base#alternant" per line, optional TAB weight; blank lines and
// lines starting with "//" are skipped.
inline std::vector<LexiconEntry> load_gnm_lexicon(std::istream& in, const Alphabet& ab) {
  std::vector<LexiconEntry> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.starts_with("//")) continue;
    LexiconEntry e;
    const auto tab = line.find('\t');
    e.form = parse_delimited(line.substr(0, tab), ab);
    if (tab != std::string::npos) {
      e.weight = std::stod(line.substr(tab + 1));
      if (e.weight < 0) throw DataError("lexicon weight must be >= 0: " + line);
    }
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<LexiconEntry> load_gnm_lexicon(const std::string& path, const Alphabet& ab) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open GNM lexicon " + path);
  return load_gnm_lexicon(in, ab);
}

inline WordlikenessScore gnm_score(const std::string& item_id, const Form& item,
                                   const std::vector<LexiconEntry>& lexicon, const GnmParams& params) {
  if (lexicon.empty()) throw EmptyLexicon("gnm_score: empty lexicon");
  params.validate();
  WordlikenessScore s{item_id, 0.0, 0.0};
  for (const auto& w : lexicon)
    s.raw += w.weight * std::exp(-weighted_edit_distance(item, w.form, params.costs) / params.sensitivity);
  s.log10_raw = std::log10(s.raw);
  return s;
}

// Each test item enters as "nl_stem#l_stem".
inline std::vector<WordlikenessScore> score_test_set(const std::vector<TestItem>& items,
                                                     const std::vector<LexiconEntry>& lexicon,
                                                     const GnmParams& params) {
  std::vector<WordlikenessScore> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(gnm_score(it.item_id, delimited_form(it.nl_stem, it.l_stem), lexicon, params));
  return out;
}

}  // namespace morphome
