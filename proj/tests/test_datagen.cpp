// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>
#include <tuple>

#include "morphome/datagen.hpp"
#include "morphome/pipeline/config.hpp"

using namespace morphome;

namespace {

const Morphology& morph() {
  static const Morphology m = Morphology::load(std::string(MORPHOME_DATA_DIR) + "/morphology.json");
  return m;
}

LexiconSpec spec(std::size_t n, std::uint64_t seed = 7) {
  LexiconSpec s;
  s.n_verbs = n;
  s.rng_seed = seed;
  s.alternation_pairs = default_alternation_pairs();
  return s;
}

std::size_t count_l(const std::vector<Paradigm>& lex) {
  std::size_t n = 0;
  for (const auto& p : lex) n += p.shape == ShapeClass::L;
  return n;
}

}  // namespace

TEST(FrequencyCondition, NamedAndCustom) {
  EXPECT_DOUBLE_EQ(FrequencyCondition::parse("C10L90NL").l_fraction, 0.10);
  EXPECT_DOUBLE_EQ(FrequencyCondition::parse("50%L-50%NL").l_fraction, 0.50);
  EXPECT_DOUBLE_EQ(FrequencyCondition::parse("90L10NL").l_fraction, 0.90);
  EXPECT_DOUBLE_EQ(FrequencyCondition::parse("0.3").l_fraction, 0.3);
  EXPECT_EQ(FrequencyCondition::c90l10nl().label(), "90%L-10%NL");
  EXPECT_THROW(FrequencyCondition::parse("C20L80NL"), ConfigError);
  EXPECT_THROW(FrequencyCondition::custom(1.0), ConfigError);
}

TEST(GenerateLexicon, ClassCountsFollowCondition) {
  EXPECT_EQ(count_l(generate_lexicon(spec(100), FrequencyCondition::c10l90nl(), morph())), 10u);
  EXPECT_EQ(count_l(generate_lexicon(spec(100), FrequencyCondition::c90l10nl(), morph())), 90u);
  EXPECT_EQ(count_l(generate_lexicon(spec(100), FrequencyCondition::c50l50nl(), morph())), 50u);
}

TEST(GenerateLexicon, LFractionWithinRoundingForAnySize) {
  for (std::size_t n : {2u, 3u, 7u, 33u, 101u})
    for (double f : {0.1, 0.37, 0.5, 0.9}) {
      const auto lex = generate_lexicon(spec(n), FrequencyCondition::custom(f), morph());
      ASSERT_EQ(lex.size(), n);
      EXPECT_LE(std::abs(static_cast<double>(count_l(lex)) / n - f), 0.5 / n + 1e-12) << n << " " << f;
    }
}

TEST(GenerateLexicon, StemsUniqueAndLPatternExact) {
  const auto lex = generate_lexicon(spec(400), FrequencyCondition::c50l50nl(), morph());
  std::set<Form> stems;
  for (const auto& p : lex) {
    EXPECT_TRUE(stems.insert(p.base_stem).second);
    if (p.alternant_stem) {
      EXPECT_TRUE(stems.insert(*p.alternant_stem).second);
      // the two stems differ in the final consonant only, by a configured pair
      EXPECT_EQ(p.base_stem.size(), p.alternant_stem->size());
      EXPECT_TRUE(std::equal(p.base_stem.begin(), p.base_stem.end() - 1, p.alternant_stem->begin()));
      bool listed = false;
      for (const auto& ap : default_alternation_pairs())
        listed |= ap.base == p.base_stem.back() && ap.alternant == p.alternant_stem->back();
      EXPECT_TRUE(listed);
    }
    for (const auto& [c, f] : p.cells) {
      const auto split = strip_suffix(f, c, morph().suffixes);
      ASSERT_TRUE(split);
      const bool uses_alt = p.alternant_stem && split->stem == *p.alternant_stem;
      EXPECT_EQ(uses_alt, p.shape == ShapeClass::L && c.in_l_pattern());
    }
  }
}

TEST(GenerateLexicon, SeedDeterminism) {
  const auto a = generate_lexicon(spec(150, 3), FrequencyCondition::c10l90nl(), morph());
  const auto b = generate_lexicon(spec(150, 3), FrequencyCondition::c10l90nl(), morph());
  const auto c = generate_lexicon(spec(150, 4), FrequencyCondition::c10l90nl(), morph());
  std::vector<Combination> ca, cb, cc;
  for (const auto& p : a) for (auto& x : enumerate_combinations(p)) ca.push_back(x);
  for (const auto& p : b) for (auto& x : enumerate_combinations(p)) cb.push_back(x);
  for (const auto& p : c) for (auto& x : enumerate_combinations(p)) cc.push_back(x);
  EXPECT_EQ(train_tsv(ca, morph().alphabet), train_tsv(cb, morph().alphabet));
  EXPECT_NE(train_tsv(ca, morph().alphabet), train_tsv(cc, morph().alphabet));
}

TEST(GenerateLexicon, Errors) {
  EXPECT_THROW(generate_lexicon(spec(1), FrequencyCondition::c10l90nl(), morph()), ConfigError);
  LexiconSpec tiny = spec(50);
  tiny.templates = {"C"};
  tiny.finals = {"p"};
  tiny.max_attempts = 200;
  EXPECT_THROW(generate_lexicon(tiny, FrequencyCondition::c10l90nl(), morph()), ExhaustedNamespace);
  LexiconSpec bad = spec(10);
  bad.alternation_pairs = {{"s", "s"}};
  EXPECT_THROW(generate_lexicon(bad, FrequencyCondition::c10l90nl(), morph()), ConfigError);
  bad.alternation_pairs = {{"s", "a"}};
  EXPECT_THROW(generate_lexicon(bad, FrequencyCondition::c10l90nl(), morph()), ConfigError);
}

TEST(EnumerateCombinations, SixCellsGiveSixty) {
  const Paradigm p = build_paradigm("x", morph().alphabet.parse("ʃut"), morph().alphabet.parse("ʃus"), ShapeClass::L,
                                    morph().suffixes);
  EXPECT_EQ(enumerate_combinations(p).size(), 60u);
}

TEST(EnumerateCombinations, MatchesBruteForceSetForSmallParadigms) {
  const auto all = six_cell_paradigm();
  for (std::size_t k = 3; k <= 6; ++k) {
    std::vector<std::pair<CellTag, std::vector<Form>>> entries;
    for (std::size_t i = 0; i < k; ++i) entries.push_back({all[i], {morph().suffixes.primary_suffix(all[i])}});
    const SuffixTable t("x", entries);
    const Paradigm p = build_paradigm("x", morph().alphabet.parse("naf"), std::nullopt, ShapeClass::NL, t);
    const auto combos = enumerate_combinations(p);
    EXPECT_EQ(combos.size(), k * (k - 1) * (k - 2) / 2);
    // brute force: every target with every unordered pair of other cells
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> want, got;
    for (std::size_t t0 = 0; t0 < k; ++t0)
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
          if (a != t0 && b != t0 && a != b) want.insert({t0, std::min(a, b), std::max(a, b)});
    auto idx = [&](const CellTag& c) { return static_cast<std::size_t>(std::find(all.begin(), all.end(), c) - all.begin()); };
    for (const auto& c : combos) {
      std::size_t a = idx(c.src1.tag), b = idx(c.src2.tag);
      EXPECT_LT(a, b);  // canonical order
      EXPECT_TRUE(got.insert({idx(c.target_tag), a, b}).second) << "duplicate";
      EXPECT_EQ(c.gold, p.form(c.target_tag));
    }
    EXPECT_EQ(got, want);
  }
}

TEST(EnumerateCombinations, TooFewCells) {
  const SuffixTable t("x", {{k1SgInd, {morph().alphabet.parse("o")}}, {k2SgInd, {morph().alphabet.parse("es")}}});
  const Paradigm p = build_paradigm("x", morph().alphabet.parse("naf"), std::nullopt, ShapeClass::NL, t);
  EXPECT_THROW(enumerate_combinations(p), DataError);
}

TEST(BuildSplit, CountsAndManifest) {
  const auto lex = generate_lexicon(spec(658), FrequencyCondition::c10l90nl(), morph());
  const DataSplit s = build_split(lex, {}, FrequencyCondition::c10l90nl(), 1, morph().alphabet);
  EXPECT_EQ(s.train.size(), 658u * 60u);
  EXPECT_EQ(s.manifest.n_train, s.train.size());
  EXPECT_EQ(s.manifest.n_l + s.manifest.n_nl, 658u);
  EXPECT_EQ(s.manifest.checksum.size(), 16u);
  EXPECT_FALSE(s.manifest.empty_lexicon);
}

TEST(BuildSplit, EmptyLexiconIsFlagged) {
  const DataSplit s = build_split({}, {}, FrequencyCondition::c10l90nl(), 1, morph().alphabet);
  EXPECT_TRUE(s.train.empty());
  EXPECT_TRUE(s.manifest.empty_lexicon);
  EXPECT_EQ(s.manifest.to_json().at("empty_lexicon"), true);
}

TEST(BuildSplit, LeakIsRejected) {
  const auto& ab = morph().alphabet;
  auto lex = generate_lexicon(spec(20), FrequencyCondition::c10l90nl(), morph());
  const TestItem item{"ʃuso", ab.parse("ʃus"), ab.parse("ʃut")};
  EXPECT_NO_THROW(build_split(lex, {item}, FrequencyCondition::c10l90nl(), 1, ab));
  lex.push_back(build_paradigm("leak", ab.parse("ʃut"), std::nullopt, ShapeClass::NL, morph().suffixes));
  EXPECT_THROW(build_split(lex, {item}, FrequencyCondition::c10l90nl(), 1, ab), OverlapError);
}

TEST(BuildSplit, ReservedStemsNeverGenerated) {
  const auto& ab = morph().alphabet;
  LexiconSpec s = spec(300);
  s.templates = {"CVC"};
  std::set<Form> reserved{ab.parse("ʃus"), ab.parse("ʃut"), ab.parse("naf"), ab.parse("nap")};
  const auto lex = generate_lexicon(s, FrequencyCondition::c50l50nl(), morph(), reserved);
  for (const auto& p : lex) {
    EXPECT_FALSE(reserved.contains(p.base_stem));
    if (p.alternant_stem) EXPECT_FALSE(reserved.contains(*p.alternant_stem));
  }
}

TEST(Tsv, LineRoundTrip) {
  const auto& ab = morph().alphabet;
  const auto lex = generate_lexicon(spec(10), FrequencyCondition::c50l50nl(), morph());
  for (const auto& p : lex)
    for (const auto& c : enumerate_combinations(p)) {
      const Combination back = parse_tsv_line(tsv_line(c, ab), ab);
      EXPECT_EQ(back.input(), c.input());
      EXPECT_EQ(back.gold, c.gold);
    }
  EXPECT_THROW(parse_tsv_line("no tab here", ab), DataError);
}
