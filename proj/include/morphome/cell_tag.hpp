// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "morphome/alphabet.hpp"
#include "morphome/errors.hpp"

namespace morphome {

enum class Mood { IND, SBJV };
enum class Number { SG, PL };

// Present-tense verb cell. Serialized as one token, e.g. "<V;IND;PRS;1;SG>".
struct CellTag {
  Mood mood = Mood::IND;
  int person = 1;
  Number number = Number::SG;

  auto operator<=>(const CellTag&) const = default;

  std::string str() const {
    std::string s = "<V;";
    s += mood == Mood::IND ? "IND" : "SBJV";
    s += ";PRS;";
    s += std::to_string(person);
    s += number == Number::SG ? ";SG>" : ";PL>";
    return s;
  }

  // Short label used in CSV output: "2SG.SBJV".
  std::string label() const {
    return std::to_string(person) + (number == Number::SG ? "SG." : "PL.") +
           (mood == Mood::IND ? "IND" : "SBJV");
  }

  static CellTag parse(std::string_view s) {
    auto bad = [&] { return DataError("malformed cell tag '" + std::string(s) + "'"); };
    if (s.size() < 2 || s.front() != '<' || s.back() != '>') throw bad();
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s.substr(1, s.size() - 2)) {
      if (c == ';') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(cur);
    if (parts.size() != 5 || parts[0] != "V" || parts[2] != "PRS") throw bad();
    CellTag t;
    if (parts[1] == "IND") t.mood = Mood::IND;
    else if (parts[1] == "SBJV") t.mood = Mood::SBJV;
    else throw bad();
    if (parts[3] != "1" && parts[3] != "2" && parts[3] != "3") throw bad();
    t.person = parts[3][0] - '0';
    if (parts[4] == "SG") t.number = Number::SG;
    else if (parts[4] == "PL") t.number = Number::PL;
    else throw bad();
    return t;
  }

  // Accepts either the bracketed token or the "2SG.SBJV" label.
  static CellTag parse_any(std::string_view s) {
    if (!s.empty() && s.front() == '<') return parse(s);
    auto dot = s.find('.');
    if (dot == std::string_view::npos || dot < 3) throw DataError("malformed cell label '" + std::string(s) + "'");
    std::string_view pn = s.substr(0, dot), mood = s.substr(dot + 1);
    std::string tok = "<V;" + std::string(mood) + ";PRS;" + std::string(pn.substr(0, 1)) + ";" +
                      std::string(pn.substr(1)) + ">";
    return parse(tok);
  }

  // Cells sharing the 1SG.IND stem in the L-shaped morphome.
  bool in_l_pattern() const {
    return mood == Mood::SBJV || (person == 1 && number == Number::SG);
  }
};

inline CellTag cell(int person, Number n, Mood m) { return CellTag{m, person, n}; }

inline const CellTag k1SgInd{Mood::IND, 1, Number::SG};
inline const CellTag k2SgInd{Mood::IND, 2, Number::SG};
inline const CellTag k3SgInd{Mood::IND, 3, Number::SG};
inline const CellTag k1SgSbjv{Mood::SBJV, 1, Number::SG};
inline const CellTag k2SgSbjv{Mood::SBJV, 2, Number::SG};
inline const CellTag k3SgSbjv{Mood::SBJV, 3, Number::SG};

inline std::vector<CellTag> six_cell_paradigm() {
  return {k1SgInd, k2SgInd, k3SgInd, k1SgSbjv, k2SgSbjv, k3SgSbjv};
}

inline std::vector<CellTag> twelve_cell_paradigm() {
  std::vector<CellTag> out;
  for (Mood m : {Mood::IND, Mood::SBJV})
    for (Number n : {Number::SG, Number::PL})
      for (int p = 1; p <= 3; ++p) out.push_back(CellTag{m, p, n});
  return out;
}

}  // namespace morphome
