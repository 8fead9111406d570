// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>

#include "morphome/combination.hpp"
#include "morphome/paradigm.hpp"
#include "morphome/random.hpp"

using namespace morphome;

namespace {

const Morphology& morph() {
  static const Morphology m = Morphology::load(std::string(MORPHOME_DATA_DIR) + "/morphology.json");
  return m;
}

Form F(const char* s) { return morph().alphabet.parse(s); }

}  // namespace

TEST(Alphabet, MultiCodepointGlyphIsOneSymbol) {
  EXPECT_EQ(F("tʃufo"), (Form{"tʃ", "u", "f", "o"}));
  EXPECT_EQ(F("ʃ u t e s"), (Form{"ʃ", "u", "t", "e", "s"}));
  EXPECT_EQ(F("pɾafis").size(), 6u);
}

TEST(Alphabet, RejectsUnknownAndDuplicateGlyphs) {
  EXPECT_THROW(F("qa"), UnknownSymbol);
  Alphabet ab;
  ab.add({"a", SymbolClass::Vowel});
  EXPECT_THROW(ab.add({"a", SymbolClass::Consonant}), ConfigError);
  EXPECT_THROW(ab.add({"", SymbolClass::Consonant}), ConfigError);
}

TEST(CellTag, SerializationIsBitExact) {
  EXPECT_EQ(k1SgInd.str(), "<V;IND;PRS;1;SG>");
  EXPECT_EQ(k2SgSbjv.str(), "<V;SBJV;PRS;2;SG>");
  for (const auto& c : twelve_cell_paradigm()) EXPECT_EQ(CellTag::parse(c.str()), c);
  EXPECT_THROW(CellTag::parse("<V;IND;PST;1;SG>"), Error);
  EXPECT_THROW(CellTag::parse("<V;IND;PRS;4;SG>"), Error);
}

TEST(CellTag, LPatternCells) {
  std::set<std::string> l;
  for (const auto& c : six_cell_paradigm())
    if (c.in_l_pattern()) l.insert(c.label());
  EXPECT_EQ(l, (std::set<std::string>{"1SG.IND", "1SG.SBJV", "2SG.SBJV", "3SG.SBJV"}));
}

TEST(EncodeCombination, MatchesPublishedExample) {
  const Combination c{{F("ʃutes"), k2SgInd}, {F("ʃuso"), k1SgInd}, k2SgSbjv, F("ʃusas"), "x"};
  const std::vector<std::string> want{"ʃ", "u", "t", "e", "s", "<V;IND;PRS;2;SG>", "#", "ʃ", "u", "s", "o",
                                      "<V;IND;PRS;1;SG>", "#", "<V;SBJV;PRS;2;SG>"};
  EXPECT_EQ(encode_combination(c, morph().alphabet), want);
}

TEST(EncodeCombination, DegenerateInputs) {
  const auto& ab = morph().alphabet;
  EXPECT_THROW(encode_combination({{Form{}, k2SgInd}, {F("ʃuso"), k1SgInd}, k2SgSbjv, {}, ""}, ab), EmptyForm);
  EXPECT_THROW(encode_combination({{Form{"q"}, k2SgInd}, {F("ʃuso"), k1SgInd}, k2SgSbjv, {}, ""}, ab),
               UnknownSymbol);
  EXPECT_THROW(encode_combination({{F("ʃuso"), k1SgInd}, {F("ʃuso"), k1SgInd}, k2SgSbjv, {}, ""}, ab), DataError);
}

TEST(EncodeCombination, RoundTripsOnRandomCombinations) {
  const auto& ab = morph().alphabet;
  const auto glyphs = [&] {
    std::vector<std::string> g;
    for (const auto& s : ab.symbols()) g.push_back(s.glyph);
    return g;
  }();
  const auto cells = twelve_cell_paradigm();
  Rng rng(11);
  for (int n = 0; n < 1000; ++n) {
    auto form = [&] {
      Form f(1 + uniform_index(rng, 8));
      for (auto& s : f) s = glyphs[uniform_index(rng, glyphs.size())];
      return f;
    };
    std::vector<CellTag> pick = cells;
    shuffle(pick, rng);
    const CombinationInput in{{form(), pick[0]}, {form(), pick[1]}, pick[2]};
    EXPECT_EQ(decode_tokens(encode_input(in, ab), ab), in);
  }
}

TEST(StripSuffix, PublishedForms) {
  const auto& t = morph().suffixes;
  auto s = strip_suffix(F("ʃuso"), k1SgInd, t);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->stem, F("ʃus"));
  EXPECT_EQ(s->suffix, F("o"));
  s = strip_suffix(F("ʃutes"), k2SgInd, t);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->stem, F("ʃut"));
  EXPECT_EQ(s->suffix, F("es"));
  EXPECT_FALSE(strip_suffix(F("o"), k1SgInd, t));
  EXPECT_FALSE(strip_suffix(F("ʃusa"), k1SgInd, t));
}

TEST(SuffixTable, RejectsAmbiguityAndGaps) {
  EXPECT_THROW(SuffixTable("x", {}), ConfigError);
  EXPECT_THROW(SuffixTable("x", {{k1SgInd, {F("s"), F("es")}}}), ConfigError);
  EXPECT_THROW(SuffixTable("x", {{k1SgInd, {}}}), ConfigError);
  EXPECT_THROW(SuffixTable("x", {{k1SgInd, {F("o")}}, {k1SgInd, {F("a")}}}), ConfigError);
  // priority order decides between overlapping but non-nested suffixes
  const SuffixTable t("x", {{k1SgInd, {F("os"), F("o")}}});
  EXPECT_EQ(strip_suffix(F("bos"), k1SgInd, t)->suffix, F("os"));
}

TEST(BuildParadigm, LShapedDecirAnalog) {
  const Paradigm p = build_paradigm("decir", F("dis"), F("dig"), ShapeClass::L, morph().suffixes);
  EXPECT_EQ(p.form(k1SgInd), F("digo"));
  EXPECT_EQ(p.form(k2SgInd), F("dises"));
  EXPECT_EQ(p.form(k2SgSbjv), F("digas"));
  for (const auto& [c, f] : p.cells) EXPECT_EQ(strip_suffix(f, c, morph().suffixes)->stem, c.in_l_pattern() ? F("dig") : F("dis"));
}

TEST(BuildParadigm, NaturalKeepsOneStem) {
  const Paradigm p = build_paradigm("naf", F("naf"), std::nullopt, ShapeClass::NL, morph().suffixes);
  ASSERT_EQ(p.cells.size(), 6u);
  for (const auto& [c, f] : p.cells) EXPECT_EQ(strip_suffix(f, c, morph().suffixes)->stem, F("naf"));
}

TEST(BuildParadigm, Errors) {
  const auto& t = morph().suffixes;
  EXPECT_THROW(build_paradigm("x", F("naf"), std::nullopt, ShapeClass::L, t), MissingAlternant);
  EXPECT_THROW(build_paradigm("x", Form{}, std::nullopt, ShapeClass::NL, t), EmptyForm);
  EXPECT_THROW(build_paradigm("x", F("naf"), F("nap"), ShapeClass::NL, t), DataError);
}

TEST(BuildParadigm, ComposeThenStripOnTwelveCells) {
  const Morphology m12 = Morphology::load(std::string(MORPHOME_DATA_DIR) + "/morphology_12cell.json");
  const Paradigm p = build_paradigm("x", m12.alphabet.parse("ten"), m12.alphabet.parse("teng"), ShapeClass::L,
                                    m12.suffixes);
  ASSERT_EQ(p.cells.size(), 12u);
  for (const auto& [c, f] : p.cells) {
    const auto s = strip_suffix(f, c, m12.suffixes);
    ASSERT_TRUE(s) << c.str();
    EXPECT_EQ(s->stem, p.stem_for(c));
    EXPECT_EQ(concat(s->stem, s->suffix), f);
  }
}

TEST(Morphology, ConfigErrors) {
  EXPECT_THROW(Morphology::load("/nonexistent.json"), ConfigError);
  nlohmann::json j = {{"alphabet", {{"consonants", {"p"}}, {"vowels", {"a"}}}},
                      {"suffixes", {{"<V;IND;PRS;1;SG>", {"q"}}}}};
  EXPECT_THROW(Morphology::from_json(j), ConfigError);
}
