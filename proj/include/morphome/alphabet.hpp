// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "morphome/errors.hpp"

namespace morphome {

enum class SymbolClass { Consonant, Vowel };

struct Symbol {
  std::string glyph;
  SymbolClass cls = SymbolClass::Consonant;
};

// A word form is a sequence of phoneme glyphs. Multi-codepoint phonemes such
// as "tʃ" occupy a single element.
using Form = std::vector<std::string>;

inline std::string join(const Form& f, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) out += sep;
    out += f[i];
  }
  return out;
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool ends_with(const Form& form, const Form& suffix) {
  return suffix.size() <= form.size() &&
         std::equal(suffix.rbegin(), suffix.rend(), form.rbegin());
}

inline Form concat(const Form& a, const Form& b) {
  Form out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<Symbol> symbols) {
    for (auto& s : symbols) add(std::move(s));
  }

  void add(Symbol s) {
    if (s.glyph.empty()) throw ConfigError("alphabet: empty glyph");
    if (index_.contains(s.glyph)) throw ConfigError("alphabet: duplicate glyph '" + s.glyph + "'");
    index_.emplace(s.glyph, symbols_.size());
    max_glyph_bytes_ = std::max(max_glyph_bytes_, s.glyph.size());
    symbols_.push_back(std::move(s));
  }

  bool contains(std::string_view glyph) const { return index_.contains(std::string(glyph)); }

  const Symbol& at(std::string_view glyph) const {
    auto it = index_.find(std::string(glyph));
    if (it == index_.end()) throw UnknownSymbol(std::string(glyph));
    return symbols_[it->second];
  }

  bool is_vowel(std::string_view glyph) const { return at(glyph).cls == SymbolClass::Vowel; }

  const std::vector<Symbol>& symbols() const { return symbols_; }

  std::vector<std::string> glyphs(SymbolClass cls) const {
    std::vector<std::string> out;
    for (const auto& s : symbols_)
      if (s.cls == cls) out.push_back(s.glyph);
    return out;
  }

  void validate(const Form& f) const {
    for (const auto& g : f)
      if (!contains(g)) throw UnknownSymbol(g);
  }

  // Greedy longest-match segmentation of an unspaced string ("tʃufo").
  Form segment(std::string_view text) const {
    Form out;
    std::size_t i = 0;
    while (i < text.size()) {
      std::size_t best = 0;
      for (std::size_t len = std::min(max_glyph_bytes_, text.size() - i); len > 0; --len) {
        if (contains(text.substr(i, len))) {
          best = len;
          break;
        }
      }
      if (best == 0) {
        // report the offending UTF-8 codepoint, not a stray byte
        std::size_t len = 1;
        while (i + len < text.size() && (static_cast<unsigned char>(text[i + len]) & 0xC0) == 0x80) ++len;
        throw UnknownSymbol(std::string(text.substr(i, len)));
      }
      out.emplace_back(text.substr(i, best));
      i += best;
    }
    return out;
  }

  // Space-separated text is split on whitespace; otherwise segmented.
  Form parse(std::string_view text) const {
    if (text.find(' ') != std::string_view::npos) {
      Form f = split_ws(text);
      validate(f);
      return f;
    }
    return segment(text);
  }

 private:
  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t max_glyph_bytes_ = 0;
};

}  // namespace morphome
