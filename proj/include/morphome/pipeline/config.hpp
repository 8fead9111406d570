// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Pipeline configuration and the read-only reference fixtures.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "morphome/datagen.hpp"
#include "morphome/errors.hpp"
#include "morphome/gnm.hpp"
#include "morphome/nn/config.hpp"
#include "morphome/stats.hpp"

namespace morphome {

inline constexpr const char* kWorkdirEnv = "MORPHOME_WORKDIR";

struct PathsConfig {
  std::string workdir = "work";
  std::string morphology = "morphology.json";
  std::string fixtures = "fixtures.json";
  std::string gnm_lexicon = "spanish_l_lexicon.txt";
  std::string gnm_costs;  // empty: unit costs
};

struct EvalConfig {
  int beam_width = 5;
  int max_len = 32;
  // "canonical": the two probe inputs per item; "target_cells": every
  // full-paradigm combination whose target is a probed cell.
  std::string probes = "canonical";
};

struct AnalysisConfig {
  double log_base = 10.0;
  double alpha = 1.0;
  double clamp = 3.0;
  double gnm_sensitivity = 0.3;
  bool svg = true;

  LogRatioOptions ratio_options() const { return {alpha, log_base, clamp}; }
};

struct PipelineConfig {
  PathsConfig paths;
  LexiconSpec lexicon;
  std::vector<std::string> conditions{"C10L90NL", "C50L50NL", "C90L10NL"};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4};
  nn::ModelConfig model;
  nn::TrainConfig train;
  EvalConfig eval;
  AnalysisConfig analysis;

  std::vector<FrequencyCondition> frequency_conditions() const {
    std::vector<FrequencyCondition> out;
    for (const auto& c : conditions) out.push_back(FrequencyCondition::parse(c));
    return out;
  }

  void validate() const {
    if (conditions.empty()) throw ConfigError("config: no conditions");
    if (seeds.empty()) throw ConfigError("config: no seeds");
    frequency_conditions();
    model.validate();
    train.validate();
    if (eval.beam_width < 1 || eval.max_len < 1) throw ConfigError("config: eval beam_width and max_len must be positive");
    if (eval.probes != "canonical" && eval.probes != "target_cells")
      throw ConfigError("config: eval.probes must be 'canonical' or 'target_cells'");
    if (!(analysis.alpha > 0) || !(analysis.log_base > 1) || !(analysis.clamp > 0))
      throw ConfigError("config: analysis needs alpha > 0, log_base > 1, clamp > 0");
    if (!(analysis.gnm_sensitivity > 0)) throw ConfigError("config: gnm_sensitivity must be positive");
  }
};

inline void to_json(nlohmann::json& j, const AlternationPair& p) { j = nlohmann::json::array({p.base, p.alternant}); }
inline void from_json(const nlohmann::json& j, AlternationPair& p) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("alternation pair must be [base, alternant]");
  p.base = j[0].get<std::string>();
  p.alternant = j[1].get<std::string>();
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PathsConfig, workdir, morphology, fixtures, gnm_lexicon, gnm_costs)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LexiconSpec, n_verbs, alternation_pairs, templates, onset_clusters,
                                                consonants, finals, rng_seed, max_attempts)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(EvalConfig, beam_width, max_len, probes)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AnalysisConfig, log_base, alpha, clamp, gnm_sensitivity, svg)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PipelineConfig, paths, lexicon, conditions, seeds, model, train, eval,
                                                analysis)

// Base (NL) final -> alternant (L) final, the same stop~fricative kind of
// alternation the test items carry.
inline std::vector<AlternationPair> default_alternation_pairs() { return {{"t", "s"}, {"p", "f"}, {"k", "x"}}; }

// Data paths are resolved against the config file's directory; the workdir
// against the current directory unless MORPHOME_WORKDIR is set.
inline PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  PipelineConfig cfg;
  cfg.lexicon.alternation_pairs = default_alternation_pairs();
  try {
    nlohmann::json j;
    in >> j;
    nlohmann::json base = cfg;
    base.merge_patch(j);
    cfg = base.get<PipelineConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  namespace fs = std::filesystem;
  const fs::path dir = fs::absolute(path).parent_path();
  for (std::string* p : {&cfg.paths.morphology, &cfg.paths.fixtures, &cfg.paths.gnm_lexicon, &cfg.paths.gnm_costs})
    if (!p->empty() && fs::path(*p).is_relative()) *p = (dir / *p).lexically_normal().string();
  if (const char* w = std::getenv(kWorkdirEnv); w && *w) cfg.paths.workdir = w;
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------
// Fixtures

struct CitedValue {
  double value = 0;
  std::string citation;
};

struct CitedAccuracy {
  double mean = 0, sd = 0, ci_low = 0, ci_high = 0;
  std::string citation;
};

struct CitedTest {
  std::string a, b;
  double statistic = 0;
  std::optional<double> p_value;
  std::string p_text;
  std::string citation;
};

struct CitedRegression {
  std::string dataset;
  double beta = 0;
  std::optional<double> p_value;
  std::string p_text;
  std::string citation;
};

struct HumanCount {
  std::string item_id;
  int n_natural = 0;
  int n_lshaped = 0;
};

struct Fixtures {
  std::vector<TestItem> items;
  // dataset -> item -> log ratio
  std::map<std::string, std::map<std::string, double>> per_item_log_ratio;
  std::map<std::string, std::string> per_item_citation;
  std::vector<HumanCount> human_counts;
  std::string human_counts_citation;
  std::map<std::string, std::map<std::string, CitedAccuracy>> accuracy;  // measure -> group
  std::map<std::string, CitedValue> mean_log_ratio_per_responder;
  std::vector<CitedTest> spearman;
  std::vector<CitedTest> ks;
  std::vector<CitedRegression> regression;

  std::set<Form> reserved_stems() const {
    std::set<Form> s;
    for (const auto& it : items) {
      s.insert(it.l_stem);
      s.insert(it.nl_stem);
    }
    return s;
  }
};

inline Fixtures load_fixtures(const std::string& path, const Alphabet& ab) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open fixtures " + path);
  Fixtures f;
  try {
    nlohmann::json j;
    in >> j;
    for (const auto& it : j.at("items")) {
      TestItem t{it.at("item_id").get<std::string>(), ab.parse(it.at("l_stem").get<std::string>()),
                 ab.parse(it.at("nl_stem").get<std::string>())};
      if (t.l_stem.size() != t.nl_stem.size() || t.l_stem == t.nl_stem ||
          !std::equal(t.l_stem.begin(), t.l_stem.end() - 1, t.nl_stem.begin()))
        throw DataError("fixture item " + t.item_id + ": stems must differ in the final consonant only");
      f.items.push_back(std::move(t));
    }
    for (const auto& [name, block] : j.at("per_item_log_ratio").items()) {
      f.per_item_citation[name] = block.at("citation").get<std::string>();
      for (const auto& [item, v] : block.at("values").items()) f.per_item_log_ratio[name][item] = v.get<double>();
    }
    const auto& hc = j.at("human_counts");
    f.human_counts_citation = hc.at("citation").get<std::string>();
    for (const auto& c : hc.at("counts"))
      f.human_counts.push_back({c.at("item_id").get<std::string>(), c.at("n_natural").get<int>(),
                                c.at("n_lshaped").get<int>()});
    for (const auto& [measure, groups] : j.at("accuracy").items())
      for (const auto& [group, a] : groups.items())
        f.accuracy[measure][group] = {a.at("mean").get<double>(), a.at("sd").get<double>(),
                                      a.at("ci_low").get<double>(), a.at("ci_high").get<double>(),
                                      a.at("citation").get<std::string>()};
    for (const auto& [group, v] : j.at("mean_log_ratio_per_responder").items())
      f.mean_log_ratio_per_responder[group] = {v.at("value").get<double>(), v.at("citation").get<std::string>()};
    auto tests = [](const nlohmann::json& arr) {
      std::vector<CitedTest> out;
      for (const auto& r : arr) {
        CitedTest t{r.at("a").get<std::string>(), r.at("b").get<std::string>(), r.at("statistic").get<double>(),
                    std::nullopt, r.at("p_text").get<std::string>(), r.at("citation").get<std::string>()};
        if (!r.at("p_value").is_null()) t.p_value = r.at("p_value").get<double>();
        out.push_back(std::move(t));
      }
      return out;
    };
    f.spearman = tests(j.at("spearman"));
    f.ks = tests(j.at("ks"));
    for (const auto& r : j.at("regression")) {
      CitedRegression g{r.at("dataset").get<std::string>(), r.at("beta").get<double>(), std::nullopt,
                        r.at("p_text").get<std::string>(), r.at("citation").get<std::string>()};
      if (!r.at("p_value").is_null()) g.p_value = r.at("p_value").get<double>();
      f.regression.push_back(std::move(g));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("fixtures " + path + ": " + e.what());
  } catch (const UnknownSymbol& e) {
    throw ConfigError("fixtures " + path + ": " + e.what());
  }
  if (f.items.empty()) throw ConfigError("fixtures " + path + ": no test items");
  return f;
}

}  // namespace morphome
