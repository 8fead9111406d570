// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "morphome/alphabet.hpp"
#include "morphome/cell_tag.hpp"
#include "morphome/errors.hpp"

namespace morphome {

enum class ShapeClass { L, NL };

inline const char* to_string(ShapeClass s) { return s == ShapeClass::L ? "L" : "NL"; }

// Per-cell inflectional endings for one conjugation class. Suffixes within a
// cell are listed in stripping priority order.
class SuffixTable {
 public:
  SuffixTable() = default;

  SuffixTable(std::string conjugation_class, std::vector<std::pair<CellTag, std::vector<Form>>> entries)
      : conjugation_class_(std::move(conjugation_class)), entries_(std::move(entries)) {
    validate();
  }

  const std::string& conjugation_class() const { return conjugation_class_; }

  std::vector<CellTag> cells() const {
    std::vector<CellTag> out;
    for (const auto& [c, _] : entries_) out.push_back(c);
    return out;
  }

  const std::vector<Form>& suffixes(const CellTag& c) const {
    for (const auto& [tag, sfx] : entries_)
      if (tag == c) return sfx;
    throw DataError("suffix table has no cell " + c.str());
  }

  bool has_cell(const CellTag& c) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == c; });
  }

  const Form& primary_suffix(const CellTag& c) const { return suffixes(c).front(); }

 private:
  void validate() const {
    if (entries_.empty()) throw ConfigError("suffix table: no cells");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& [tag, sfx] = entries_[i];
      for (std::size_t j = 0; j < i; ++j)
        if (entries_[j].first == tag) throw ConfigError("suffix table: duplicate cell " + tag.str());
      if (sfx.empty()) throw ConfigError("suffix table: cell " + tag.str() + " has no suffix");
      for (std::size_t a = 0; a < sfx.size(); ++a) {
        if (sfx[a].empty()) throw ConfigError("suffix table: empty suffix in " + tag.str());
        for (std::size_t b = 0; b < sfx.size(); ++b)
          if (a != b && ends_with(sfx[a], sfx[b]))
            throw ConfigError("suffix table: ambiguous suffixes '" + join(sfx[a]) + "' / '" + join(sfx[b]) +
                              "' in " + tag.str());
      }
    }
  }

  std::string conjugation_class_;
  std::vector<std::pair<CellTag, std::vector<Form>>> entries_;
};

struct StemSplit {
  Form stem;
  Form suffix;
};

// Splits off the highest-priority suffix of `cell` that leaves a nonempty
// stem. No match is an ordinary outcome, not an error.
inline std::optional<StemSplit> strip_suffix(const Form& form, const CellTag& cell, const SuffixTable& table) {
  if (form.empty()) return std::nullopt;
  for (const Form& sfx : table.suffixes(cell)) {
    if (sfx.size() < form.size() && ends_with(form, sfx)) {
      return StemSplit{Form(form.begin(), form.end() - static_cast<std::ptrdiff_t>(sfx.size())), sfx};
    }
  }
  return std::nullopt;
}

struct Paradigm {
  std::string lemma_id;
  ShapeClass shape = ShapeClass::NL;
  Form base_stem;
  std::optional<Form> alternant_stem;
  std::vector<std::pair<CellTag, Form>> cells;

  const Form& form(const CellTag& c) const {
    for (const auto& [tag, f] : cells)
      if (tag == c) return f;
    throw DataError("paradigm " + lemma_id + " has no cell " + c.str());
  }

  const Form& stem_for(const CellTag& c) const {
    return shape == ShapeClass::L && c.in_l_pattern() ? *alternant_stem : base_stem;
  }
};

// L-class paradigms put the alternant in 1SG.IND and every SBJV cell; all
// other cells (and every NL cell) use the base stem.
inline Paradigm build_paradigm(std::string lemma_id, const Form& base, const std::optional<Form>& alternant,
                               ShapeClass shape, const SuffixTable& table) {
  if (base.empty()) throw EmptyForm("build_paradigm: empty base stem for " + lemma_id);
  if (shape == ShapeClass::L && (!alternant || alternant->empty()))
    throw MissingAlternant("build_paradigm: L-class lemma " + lemma_id + " needs an alternant stem");
  if (shape == ShapeClass::NL && alternant)
    throw DataError("build_paradigm: NL-class lemma " + lemma_id + " must not carry an alternant");
  Paradigm p{std::move(lemma_id), shape, base, alternant, {}};
  for (const CellTag& c : table.cells()) {
    p.cells.emplace_back(c, concat(p.stem_for(c), table.primary_suffix(c)));
  }
  return p;
}

// Alphabet + suffix table, read from a UTF-8 JSON document:
//   { "alphabet": {"consonants": [...], "vowels": [...]},
//     "conjugation_class": "er",
//     "cells": ["<V;IND;PRS;1;SG>", ...],            (optional, defaults to suffix order)
//     "suffixes": {"<V;IND;PRS;1;SG>": ["o"], ...} }
struct Morphology {
  Alphabet alphabet;
  SuffixTable suffixes;

  static Morphology from_json(const nlohmann::json& j) {
    Morphology m;
    try {
      for (const auto& g : j.at("alphabet").at("consonants")) m.alphabet.add({g.get<std::string>(), SymbolClass::Consonant});
      for (const auto& g : j.at("alphabet").at("vowels")) m.alphabet.add({g.get<std::string>(), SymbolClass::Vowel});
      std::vector<CellTag> order;
      if (j.contains("cells")) {
        for (const auto& c : j.at("cells")) order.push_back(CellTag::parse(c.get<std::string>()));
      } else {
        for (const auto& [k, _] : j.at("suffixes").items()) order.push_back(CellTag::parse(k));
      }
      std::vector<std::pair<CellTag, std::vector<Form>>> entries;
      const auto& sj = j.at("suffixes");
      for (const CellTag& c : order) {
        if (!sj.contains(c.str())) throw ConfigError("morphology: no suffixes for " + c.str());
        std::vector<Form> forms;
        for (const auto& s : sj.at(c.str())) forms.push_back(m.alphabet.parse(s.get<std::string>()));
        entries.emplace_back(c, std::move(forms));
      }
      m.suffixes = SuffixTable(j.value("conjugation_class", std::string("default")), std::move(entries));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("morphology config: ") + e.what());
    } catch (const UnknownSymbol& e) {
      throw ConfigError(std::string("morphology config: ") + e.what());
    }
    return m;
  }

  static Morphology load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open morphology config " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("morphology config " + path + ": " + e.what());
    }
    return from_json(j);
  }
};

}  // namespace morphome
