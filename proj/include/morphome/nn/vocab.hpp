// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "morphome/combination.hpp"
#include "morphome/errors.hpp"
#include "morphome/paradigm.hpp"

namespace morphome::nn {

inline constexpr int kPad = 0;
inline constexpr int kBos = 1;
inline constexpr int kEos = 2;

class Vocab {
 public:
  Vocab() : Vocab(std::vector<std::string>{}) {}

  // `tokens` excludes the three specials, which always take ids 0..2.
  explicit Vocab(const std::vector<std::string>& tokens) {
    for (const char* s : {"<pad>", "<s>", "</s>"}) push(s);
    for (const auto& t : tokens) push(t);
  }

  // Phoneme glyphs, "#", then every cell tag of the suffix table.
  static Vocab for_morphology(const Morphology& m) {
    std::vector<std::string> toks;
    for (const auto& s : m.alphabet.symbols()) toks.push_back(s.glyph);
    toks.push_back(kSeparatorToken);
    for (const auto& c : m.suffixes.cells()) toks.push_back(c.str());
    return Vocab(toks);
  }

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(int id) const {
    if (id < 0 || id >= size()) throw UnknownToken("token id " + std::to_string(id) + " out of range");
    return tokens_[static_cast<std::size_t>(id)];
  }

  int id(const std::string& tok) const {
    auto it = ids_.find(tok);
    if (it == ids_.end()) throw UnknownToken("token '" + tok + "' not in vocabulary");
    return it->second;
  }

  std::vector<int> encode(const std::vector<std::string>& toks) const {
    std::vector<int> out;
    out.reserve(toks.size());
    for (const auto& t : toks) out.push_back(id(t));
    return out;
  }

  std::vector<std::string> decode(const std::vector<int>& ids) const {
    std::vector<std::string> out;
    for (int i : ids) {
      if (i == kEos) break;
      if (i == kPad || i == kBos) continue;
      out.push_back(token(i));
    }
    return out;
  }

  bool operator==(const Vocab& o) const { return tokens_ == o.tokens_; }

 private:
  void push(const std::string& t) {
    if (ids_.contains(t)) throw ConfigError("vocabulary: duplicate token '" + t + "'");
    ids_.emplace(t, size());
    tokens_.push_back(t);
  }

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

// Model-ready ids: source ends with </s>; target excludes <s>/</s>.
struct Example {
  std::vector<int> src;
  std::vector<int> tgt;
};

inline Example to_example(const CombinationInput& in, const Form& gold, const Vocab& vocab, const Alphabet& ab) {
  Example e;
  e.src = vocab.encode(encode_input(in, ab));
  e.src.push_back(kEos);
  e.tgt = vocab.encode(gold);
  return e;
}

inline Example to_example(const Combination& c, const Vocab& vocab, const Alphabet& ab) {
  return to_example(c.input(), c.gold, vocab, ab);
}

}  // namespace morphome::nn
