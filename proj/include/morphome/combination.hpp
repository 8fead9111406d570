// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "morphome/alphabet.hpp"
#include "morphome/cell_tag.hpp"
#include "morphome/errors.hpp"
#include "morphome/paradigm.hpp"

namespace morphome {

inline constexpr const char* kSeparatorToken = "#";

struct Source {
  Form form;
  CellTag tag;
  bool operator==(const Source&) const = default;
};

// The model's input side: two filled cells and the cell to produce.
struct CombinationInput {
  Source src1;
  Source src2;
  CellTag target;
  bool operator==(const CombinationInput&) const = default;
};

struct Combination {
  Source src1;
  Source src2;
  CellTag target_tag;
  Form gold;
  std::string lemma_id;

  CombinationInput input() const { return {src1, src2, target_tag}; }
};

// "ʃ u t e s <V;IND;PRS;2;SG> # ʃ u s o <V;IND;PRS;1;SG> # <V;SBJV;PRS;2;SG>"
inline std::vector<std::string> encode_input(const CombinationInput& c, const Alphabet& alphabet) {
  if (c.src1.form.empty() || c.src2.form.empty()) throw EmptyForm("combination has an empty source form");
  if (c.src1.tag == c.src2.tag || c.src1.tag == c.target || c.src2.tag == c.target)
    throw DataError("combination tags must be pairwise distinct");
  alphabet.validate(c.src1.form);
  alphabet.validate(c.src2.form);
  std::vector<std::string> tokens;
  tokens.reserve(c.src1.form.size() + c.src2.form.size() + 5);
  tokens.insert(tokens.end(), c.src1.form.begin(), c.src1.form.end());
  tokens.push_back(c.src1.tag.str());
  tokens.push_back(kSeparatorToken);
  tokens.insert(tokens.end(), c.src2.form.begin(), c.src2.form.end());
  tokens.push_back(c.src2.tag.str());
  tokens.push_back(kSeparatorToken);
  tokens.push_back(c.target.str());
  return tokens;
}

inline std::vector<std::string> encode_combination(const Combination& c, const Alphabet& alphabet) {
  return encode_input(c.input(), alphabet);
}

inline CombinationInput decode_tokens(const std::vector<std::string>& tokens, const Alphabet& alphabet) {
  CombinationInput out;
  std::size_t i = 0;
  auto read_source = [&](Source& s) {
    while (i < tokens.size() && !tokens[i].empty() && tokens[i].front() != '<') {
      if (!alphabet.contains(tokens[i])) throw UnknownSymbol(tokens[i]);
      s.form.push_back(tokens[i++]);
    }
    if (s.form.empty()) throw EmptyForm("decode_tokens: empty source form");
    if (i >= tokens.size()) throw DataError("decode_tokens: missing source tag");
    s.tag = CellTag::parse(tokens[i++]);
    if (i >= tokens.size() || tokens[i] != kSeparatorToken) throw DataError("decode_tokens: missing '#'");
    ++i;
  };
  read_source(out.src1);
  read_source(out.src2);
  if (i + 1 != tokens.size()) throw DataError("decode_tokens: expected a single target tag");
  out.target = CellTag::parse(tokens[i]);
  return out;
}

// One nonce verb of the human experiment: the form shown in the L-shaped
// cell (1SG.IND) and the form shown in the NL cell (2SG.IND).
struct TestItem {
  std::string item_id;
  Form l_stem;
  Form nl_stem;

  Form l_form(const SuffixTable& t) const { return concat(l_stem, t.primary_suffix(k1SgInd)); }
  Form nl_form(const SuffixTable& t) const { return concat(nl_stem, t.primary_suffix(k2SgInd)); }

  // Full paradigm under the L-shaped reading: NL stem as base, L stem as alternant.
  Paradigm paradigm(const SuffixTable& t) const {
    return build_paradigm(item_id, nl_stem, l_stem, ShapeClass::L, t);
  }
};

}  // namespace morphome
