// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Pipeline subcommands. Workdir layout:
//
//   config.resolved.json
//   data/<COND>/seed<k>/{train.tsv,test.tsv,lexicon.tsv,manifest.json}
//   models/<COND>/seed<k>/{ckpt_e0010.bin,...,final.bin,train_log.csv,config.json}
//   eval/<COND>/seed<k>/{paradigms.csv,probes.csv}
//   analysis/{accuracy,preference_by_item,preference_by_responder,
//             preference_summary,correlation,ks}.csv
//   gnm/wordlikeness.csv
//   regress/regression.csv
//   report/...

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "morphome/datagen.hpp"
#include "morphome/eval.hpp"
#include "morphome/glmm.hpp"
#include "morphome/gnm.hpp"
#include "morphome/nn/checkpoint.hpp"
#include "morphome/nn/decode.hpp"
#include "morphome/nn/trainer.hpp"
#include "morphome/pipeline/config.hpp"
#include "morphome/pipeline/io.hpp"
#include "morphome/preference.hpp"
#include "morphome/stats.hpp"

namespace morphome::pipeline {

namespace fs = std::filesystem;

inline constexpr const char* kParticipants = "participants";

// Command-line overrides shared by the subcommands.
struct Overrides {
  std::optional<std::string> condition;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;   // gen: data root
  std::optional<std::string> data;  // train: data root
  std::optional<long> updates;      // train: max_updates
};

struct Context {
  PipelineConfig cfg;
  Morphology morph;
  Fixtures fixtures;
  std::ostream* log = nullptr;

  static Context load(PipelineConfig cfg, std::ostream* log = nullptr) {
    Context c{std::move(cfg), {}, {}, log};
    c.morph = Morphology::load(c.cfg.paths.morphology);
    c.fixtures = load_fixtures(c.cfg.paths.fixtures, c.morph.alphabet);
    return c;
  }

  fs::path workdir() const { return cfg.paths.workdir; }

  template <class... A>
  void say(const A&... a) const {
    if (!log) return;
    ((*log) << ... << a) << '\n';
    log->flush();
  }
};

struct Run {
  FrequencyCondition condition;
  std::uint64_t seed;

  std::string responder_id() const { return condition.name + "-s" + std::to_string(seed); }
  fs::path rel() const { return fs::path(condition.name) / ("seed" + std::to_string(seed)); }
};

inline std::vector<Run> selected_runs(const Context& ctx, const Overrides& ov) {
  std::vector<Run> runs;
  std::vector<FrequencyCondition> conds = ctx.cfg.frequency_conditions();
  if (ov.condition) {
    const FrequencyCondition want = FrequencyCondition::parse(*ov.condition);
    conds = {want};
  }
  std::vector<std::uint64_t> seeds = ctx.cfg.seeds;
  if (ov.seed) seeds = {*ov.seed};
  for (const auto& c : conds)
    for (auto s : seeds) runs.push_back({c, s});
  return runs;
}

inline void write_resolved_config(const Context& ctx) {
  write_text(ctx.workdir() / "config.resolved.json", nlohmann::json(ctx.cfg).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// gen

inline std::string lexicon_tsv(const std::vector<Paradigm>& lex) {
  std::string out = "lemma_id\tshape\tbase_stem\talternant_stem\n";
  for (const auto& p : lex)
    out += p.lemma_id + '\t' + (p.shape == ShapeClass::L ? "L" : "NL") + '\t' + join(p.base_stem) + '\t' +
           (p.alternant_stem ? join(*p.alternant_stem) : std::string()) + '\n';
  return out;
}

// The 60 full-paradigm combinations of every test item, item by item.
inline std::vector<Combination> test_combinations(const std::vector<TestItem>& items, const SuffixTable& table) {
  std::vector<Combination> out;
  for (const auto& it : items) {
    auto c = enumerate_combinations(it.paradigm(table));
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

inline void cmd_gen(const Context& ctx, const Overrides& ov = {}) {
  const fs::path root = ov.out ? fs::path(*ov.out) : ctx.workdir() / "data";
  write_resolved_config(ctx);
  for (const Run& run : selected_runs(ctx, ov)) {
    LexiconSpec spec = ctx.cfg.lexicon;
    spec.rng_seed = run.seed;
    ctx.say("gen ", run.responder_id(), ": root seed ", run.seed, ", ", spec.n_verbs, " verbs, ",
            run.condition.label());
    const auto lex = generate_lexicon(spec, run.condition, ctx.morph, ctx.fixtures.reserved_stems());
    const DataSplit split = build_split(lex, ctx.fixtures.items, run.condition, run.seed, ctx.morph.alphabet);
    const fs::path dir = root / run.rel();
    write_text(dir / "train.tsv", train_tsv(split.train, ctx.morph.alphabet));
    write_text(dir / "test.tsv", train_tsv(test_combinations(split.test_items, ctx.morph.suffixes), ctx.morph.alphabet));
    write_text(dir / "lexicon.tsv", lexicon_tsv(lex));
    write_text(dir / "manifest.json", split.manifest.to_json().dump(2) + "\n");
    ctx.say("  ", split.manifest.n_train, " training combinations (", split.manifest.n_l, " L, ", split.manifest.n_nl,
            " NL verbs), checksum ", split.manifest.checksum);
  }
}

// ---------------------------------------------------------------------------
// train

inline std::vector<Combination> read_tsv_combinations(const fs::path& path, const Alphabet& ab) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string() + " (run `gen` first)");
  std::vector<Combination> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(parse_tsv_line(line, ab));
  return out;
}

inline void cmd_train(const Context& ctx, const Overrides& ov = {}) {
  const fs::path data_root = ov.data ? fs::path(*ov.data) : ctx.workdir() / "data";
  const nn::Vocab vocab = nn::Vocab::for_morphology(ctx.morph);
  for (const Run& run : selected_runs(ctx, ov)) {
    const auto combos = read_tsv_combinations(data_root / run.rel() / "train.tsv", ctx.morph.alphabet);
    if (combos.empty()) throw EmptyInput("training set for " + run.responder_id() + " is empty");
    std::vector<nn::Example> data;
    data.reserve(combos.size());
    for (const auto& c : combos) data.push_back(nn::to_example(c, vocab, ctx.morph.alphabet));

    nn::TrainConfig tc = ctx.cfg.train;
    tc.seed = run.seed;
    if (ov.updates) tc.max_updates = *ov.updates;
    const fs::path dir = ctx.workdir() / "models" / run.rel();
    fs::create_directories(dir);
    write_text(dir / "config.json",
               nlohmann::json{{"model", ctx.cfg.model}, {"train", tc}, {"condition", run.condition.name}}.dump(2) + "\n");
    ctx.say("train ", run.responder_id(), ": ", data.size(), " examples, ", tc.max_updates, " updates, seed ", tc.seed);

    nn::Trainer<float> trainer(ctx.cfg.model, tc, vocab);
    typename nn::Trainer<float>::Hooks hooks;
    hooks.on_checkpoint = [&](const nn::Checkpoint<float>& ck, bool is_final) {
      char name[32];
      std::snprintf(name, sizeof name, "ckpt_e%04d.bin", ck.epoch);
      nn::save_checkpoint((dir / (is_final ? std::string("final.bin") : std::string(name))).string(), ck);
    };
    hooks.on_log = [&](const nn::LogRow& r) {
      ctx.say("  update ", r.update, " epoch ", r.epoch, " loss ", r.loss, " grad_norm ", r.grad_norm);
    };
    const auto log = trainer.train(data, hooks);
    write_text(dir / "train_log.csv", nn::training_log_csv(log));
  }
}

// ---------------------------------------------------------------------------
// eval

struct EvalOutput {
  std::vector<ResponseRecord> paradigms;
  std::vector<ResponseRecord> probes;
};

template <class T>
EvalOutput evaluate_model(const nn::Transformer<T>& model, const nn::Vocab& vocab, const std::vector<TestItem>& items,
                          const Morphology& morph, const EvalConfig& ec, const std::string& responder,
                          const std::string& condition) {
  EvalOutput out;
  const nn::BeamOptions bo{ec.beam_width, ec.max_len, false};
  for (const auto& item : items) {
    std::map<std::pair<CellTag, std::pair<CellTag, CellTag>>, Form> decoded;
    for (const auto& c : enumerate_combinations(item.paradigm(morph.suffixes))) {
      const nn::Example ex = nn::to_example(c, vocab, morph.alphabet);
      const nn::BeamResult res = nn::beam_decode(model, ex.src, bo);
      const Form pred = vocab.decode(res.hypotheses.front().tokens);
      decoded[{c.target_tag, {c.src1.tag, c.src2.tag}}] = pred;
      out.paradigms.push_back(classify_response(item, c.target_tag, pred, morph.suffixes, responder, condition));
    }
    if (ec.probes == "canonical") {
      for (const auto& c : probe_combinations(item, morph.suffixes)) {
        const Form& pred = decoded.at({c.target_tag, {c.src1.tag, c.src2.tag}});
        out.probes.push_back(classify_response(item, c.target_tag, pred, morph.suffixes, responder, condition));
      }
    }
  }
  if (ec.probes == "target_cells") out.probes = restrict_to_probed_cells(out.paradigms);
  return out;
}

inline void cmd_eval(const Context& ctx, const Overrides& ov = {}) {
  for (const Run& run : selected_runs(ctx, ov)) {
    const fs::path ck_path = ctx.workdir() / "models" / run.rel() / "final.bin";
    if (!fs::exists(ck_path)) throw DataError("missing checkpoint " + ck_path.string() + " (run `train` first)");
    const auto ck = nn::load_checkpoint<float>(ck_path.string());
    ctx.say("eval ", run.responder_id(), ": checkpoint at update ", ck.update);
    const EvalOutput out =
        evaluate_model(ck.model, ck.vocab, ctx.fixtures.items, ctx.morph, ctx.cfg.eval, run.responder_id(),
                       run.condition.name);
    const fs::path dir = ctx.workdir() / "eval" / run.rel();
    write_text(dir / "paradigms.csv", responses_csv(out.paradigms));
    write_text(dir / "probes.csv", responses_csv(out.probes));
  }
}

// ---------------------------------------------------------------------------
// analyze

struct Loaded {
  std::map<std::string, std::vector<ResponseRecord>> paradigms;  // condition -> records over seeds
  std::map<std::string, std::vector<ResponseRecord>> probes;
  std::vector<std::string> conditions;  // config order
};

inline Loaded load_eval(const Context& ctx, const Overrides& ov = {}) {
  Loaded l;
  std::vector<std::string> missing;
  for (const Run& run : selected_runs(ctx, ov)) {
    const fs::path dir = ctx.workdir() / "eval" / run.rel();
    for (const char* f : {"paradigms.csv", "probes.csv"})
      if (!fs::exists(dir / f)) missing.push_back((dir / f).string());
  }
  if (!missing.empty()) {
    std::string msg = "missing evaluation outputs (run `eval` first):";
    for (const auto& m : missing) msg += "\n  " + m;
    throw DataError(msg);
  }
  for (const Run& run : selected_runs(ctx, ov)) {
    const fs::path dir = ctx.workdir() / "eval" / run.rel();
    const std::string& c = run.condition.name;
    if (std::find(l.conditions.begin(), l.conditions.end(), c) == l.conditions.end()) l.conditions.push_back(c);
    auto p = read_responses((dir / "paradigms.csv").string());
    auto q = read_responses((dir / "probes.csv").string());
    l.paradigms[c].insert(l.paradigms[c].end(), p.begin(), p.end());
    l.probes[c].insert(l.probes[c].end(), q.begin(), q.end());
  }
  return l;
}

// Per-item log ratios of every dataset, in fixture item order. Participants
// use the published per-item values.
inline std::map<std::string, std::vector<double>> per_item_series(const Context& ctx, const Loaded& l) {
  std::map<std::string, std::vector<double>> out;
  const auto& part = ctx.fixtures.per_item_log_ratio.at(kParticipants);
  for (const auto& it : ctx.fixtures.items) out[kParticipants].push_back(part.at(it.item_id));
  const LogRatioOptions ro = ctx.cfg.analysis.ratio_options();
  for (const auto& c : l.conditions) {
    std::map<std::string, double> by;
    for (const auto& r : preference_log_ratio(l.probes.at(c), RatioUnit::PerItem, ro)) by[r.key] = r.log_ratio;
    for (const auto& it : ctx.fixtures.items) {
      // an item whose every answer was excluded contributes a neutral ratio
      auto f = by.find(it.item_id);
      out[c].push_back(f == by.end() ? log_ratio(0, 0, ro) : f->second);
    }
  }
  return out;
}

inline std::vector<std::pair<std::string, std::string>> comparisons(const std::vector<std::string>& conds) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& c : conds) out.push_back({c, kParticipants});
  for (std::size_t i = 0; i < conds.size(); ++i)
    for (std::size_t j = i + 1; j < conds.size(); ++j) out.push_back({conds[i], conds[j]});
  return out;
}

inline std::string condition_label(const std::string& name) {
  if (name == kParticipants) return "Participants";
  return FrequencyCondition::parse(name).label();
}

inline std::string comparison_label(const std::string& a, const std::string& b) {
  return condition_label(a) + " vs. " + condition_label(b);
}

inline void cmd_analyze(const Context& ctx, const Overrides& ov = {}) {
  const Loaded l = load_eval(ctx, ov);
  const fs::path dir = ctx.workdir() / "analysis";
  const LogRatioOptions ro = ctx.cfg.analysis.ratio_options();

  CsvTable acc{{"measure", "group", "mean", "sd", "ci_low", "ci_high", "n_responders", "n_records", "records", "method"},
               {}};
  auto add_acc = [&](const std::string& measure, const std::string& group, const AccuracySummary& s,
                     const std::string& records) {
    acc.rows.push_back({measure, group, fmt(s.mean), fmt(s.sd), fmt(s.ci_low), fmt(s.ci_high),
                        std::to_string(s.n_responders), std::to_string(s.n_records), records, s.method});
  };
  for (const auto& c : l.conditions) {
    const auto& recs = l.paradigms.at(c);
    const auto kept = exclude_other(recs);
    if (!kept.empty()) {
      const auto probed = restrict_to_probed_cells(kept);
      if (!probed.empty()) add_acc("stem", c, stem_accuracy(kept, true), "probed cells; Other excluded");
      add_acc("sequence", c, sequence_accuracy(kept), "full paradigms; Other excluded");
    } else {
      ctx.say("analyze: every ", c, " response was classified Other; stem and sequence accuracy undefined");
    }
    add_acc("suffix", c, suffix_accuracy(recs), "full paradigms; all responses");
  }
  write_text(dir / "accuracy.csv", to_csv(acc));

  CsvTable by_item{{"group", "item_id", "n_natural", "n_lshaped", "log_ratio"}, {}};
  for (const auto& hc : ctx.fixtures.human_counts)
    by_item.rows.push_back({kParticipants, hc.item_id, std::to_string(hc.n_natural), std::to_string(hc.n_lshaped),
                            fmt(log_ratio(hc.n_natural, hc.n_lshaped, ro))});
  for (const auto& c : l.conditions)
    for (const auto& r : preference_log_ratio(l.probes.at(c), RatioUnit::PerItem, ro))
      by_item.rows.push_back(
          {c, r.key, std::to_string(r.n_natural), std::to_string(r.n_lshaped), fmt(r.log_ratio)});
  write_text(dir / "preference_by_item.csv", to_csv(by_item));

  CsvTable by_resp{{"group", "responder_id", "n_natural", "n_lshaped", "log_ratio"}, {}};
  CsvTable summary{{"group", "mean_log_ratio", "sd", "n_responders"}, {}};
  for (const auto& c : l.conditions) {
    std::vector<double> v;
    for (const auto& r : preference_log_ratio(l.probes.at(c), RatioUnit::PerResponder, ro)) {
      by_resp.rows.push_back(
          {c, r.key, std::to_string(r.n_natural), std::to_string(r.n_lshaped), fmt(r.log_ratio)});
      v.push_back(r.log_ratio);
    }
    if (!v.empty()) {
      const Summary s = summarize(v);
      summary.rows.push_back({c, fmt(s.mean), fmt(s.sd), std::to_string(s.n)});
    }
  }
  write_text(dir / "preference_by_responder.csv", to_csv(by_resp));
  write_text(dir / "preference_summary.csv", to_csv(summary));

  const auto series = per_item_series(ctx, l);
  CsvTable corr{{"comparison", "a", "b", "rho", "p_value", "stars", "n", "method"}, {}};
  CsvTable ks{{"comparison", "a", "b", "d", "p_value", "stars", "n1", "n2", "method"}, {}};
  for (const auto& [a, b] : comparisons(l.conditions)) {
    try {
      const auto r = spearman(series.at(a), series.at(b));
      corr.rows.push_back({comparison_label(a, b), a, b, fmt(r.rho), fmt(r.p_value), significance_stars(r.p_value),
                           std::to_string(r.n), r.method});
    } catch (const ConstantInput&) {
      corr.rows.push_back({comparison_label(a, b), a, b, "NA", "NA", "", std::to_string(series.at(a).size()),
                           "undefined: constant input"});
    }
    const auto k = ks_two_sample(series.at(a), series.at(b));
    ks.rows.push_back({comparison_label(a, b), a, b, fmt(k.d), fmt(k.p_value), significance_stars(k.p_value),
                       std::to_string(k.n1), std::to_string(k.n2), "asymptotic Kolmogorov"});
  }
  write_text(dir / "correlation.csv", to_csv(corr));
  write_text(dir / "ks.csv", to_csv(ks));
  ctx.say("analyze: wrote ", (dir / "*.csv").string());
}

// ---------------------------------------------------------------------------
// gnm

inline std::vector<WordlikenessScore> compute_wordlikeness(const Context& ctx) {
  GnmParams params;
  params.sensitivity = ctx.cfg.analysis.gnm_sensitivity;
  if (!ctx.cfg.paths.gnm_costs.empty()) params.costs = EditCosts::load(ctx.cfg.paths.gnm_costs);
  const auto lexicon = load_gnm_lexicon(ctx.cfg.paths.gnm_lexicon, ctx.morph.alphabet);
  return score_test_set(ctx.fixtures.items, lexicon, params);
}

inline void cmd_gnm(const Context& ctx) {
  const auto scores = compute_wordlikeness(ctx);
  write_text(ctx.workdir() / "gnm" / "wordlikeness.csv", scores_csv(scores));
  ctx.say("gnm: scored ", scores.size(), " items against ", ctx.cfg.paths.gnm_lexicon);
}

// ---------------------------------------------------------------------------
// regress

// Expands per-item (natural, L) counts into pseudo-responses dealt round-robin
// to `n_responders` pseudo-participants.
inline std::vector<RegressionRow> expand_counts(const std::vector<HumanCount>& counts,
                                                const std::map<std::string, double>& x, int n_responders) {
  std::vector<RegressionRow> rows;
  int k = 0;
  for (const auto& c : counts) {
    for (int answer : {0, 1}) {
      const int n = answer ? c.n_lshaped : c.n_natural;
      for (int i = 0; i < n; ++i, ++k) {
        char id[16];
        std::snprintf(id, sizeof id, "p%03d", k % n_responders + 1);
        rows.push_back({answer, x.at(c.item_id), c.item_id, id});
      }
    }
  }
  return rows;
}

inline std::vector<RegressionRow> regression_rows(const std::vector<ResponseRecord>& probes,
                                                  const std::map<std::string, double>& x) {
  std::vector<RegressionRow> rows;
  for (const auto& r : exclude_other(probes))
    rows.push_back({r.classification == ResponseClass::LShaped ? 1 : 0, x.at(r.item_id), r.item_id, r.responder_id});
  return rows;
}

inline constexpr int kHumanPseudoParticipants = 107;

inline void cmd_regress(const Context& ctx, const Overrides& ov = {}) {
  const fs::path scores_path = ctx.workdir() / "gnm" / "wordlikeness.csv";
  if (!fs::exists(scores_path)) throw DataError("missing " + scores_path.string() + " (run `gnm` first)");
  std::map<std::string, double> x;
  for (const auto& s : read_scores(scores_path.string())) x[s.item_id] = s.log10_raw;
  const Loaded l = load_eval(ctx, ov);

  std::vector<std::pair<std::string, std::vector<RegressionRow>>> datasets;
  datasets.emplace_back(kParticipants, expand_counts(ctx.fixtures.human_counts, x, kHumanPseudoParticipants));
  for (const auto& c : l.conditions) datasets.emplace_back(c, regression_rows(l.probes.at(c), x));

  CsvTable t{{"dataset", "status", "n_rows", "n_items", "n_responders", "beta", "se", "z", "p_value", "stars",
              "intercept", "sigma_item", "sigma_responder", "converged", "method", "note"},
             {}};
  for (const auto& [name, rows] : datasets) {
    const std::string note = name == kParticipants ? "fixture-reconstructed responses" : "";
    std::set<std::string> items, resp;
    for (const auto& r : rows) {
      items.insert(r.item);
      resp.insert(r.responder);
    }
    try {
      const RegressionFit f = fit_glmm(rows);
      t.rows.push_back({name, "ok", std::to_string(f.n_rows), std::to_string(f.n_items),
                        std::to_string(f.n_responders), fmt(f.beta), fmt(f.se_beta), fmt(f.wald_z), fmt(f.p_value),
                        significance_stars(f.p_value), fmt(f.intercept), fmt(f.sigma_item),
                        fmt(f.sigma_responder), f.converged ? "1" : "0", f.method, note});
      ctx.say("regress ", name, ": beta ", f.beta, " (se ", f.se_beta, ", p ", f.p_value, ")");
    } catch (const Error& e) {
      const std::string status = dynamic_cast<const Separation*>(&e)        ? "separation"
                                 : dynamic_cast<const NonConvergence*>(&e) ? "nonconvergence"
                                                                           : "invalid_data";
      std::string why = e.what();
      std::replace(why.begin(), why.end(), ',', ';');
      t.rows.push_back({name, status, std::to_string(rows.size()), std::to_string(items.size()),
                        std::to_string(resp.size()), "NA", "NA", "NA", "NA", "", "NA", "NA", "NA", "0",
                        "Laplace-approximate penalized likelihood", (note.empty() ? "" : note + "; ") + why});
      ctx.say("regress ", name, ": not fitted (", e.what(), ")");
    }
  }
  write_text(ctx.workdir() / "regress" / "regression.csv", to_csv(t));
}

}  // namespace morphome::pipeline
