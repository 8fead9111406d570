// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0
//
// morphome-lab <gen|train|eval|analyze|gnm|regress|report> --config <file>
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
// failure. MORPHOME_WORKDIR overrides the configured workdir.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "morphome/pipeline/commands.hpp"
#include "morphome/pipeline/report.hpp"

namespace {

int exit_code(const morphome::Error& e) {
  switch (e.kind()) {
    case morphome::ErrorKind::Config: return 2;
    case morphome::ErrorKind::Data: return 3;
    case morphome::ErrorKind::Numerical: return 4;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace morphome::pipeline;
  CLI::App app{"Frequency-controlled morphological reinflection experiments"};
  app.require_subcommand(1, 1);
  std::string config_path;
  Overrides ov;
  std::string condition, out, data;
  std::uint64_t seed = 0;
  long updates = -1;

  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sc = app.add_subcommand(name, help);
    sc->add_option("--config", config_path, "pipeline config (JSON)")->required()->check(CLI::ExistingFile);
    return sc;
  };
  CLI::App* gen = add("gen", "generate lexicons and training/test combinations");
  CLI::App* train = add("train", "train one transformer per condition and seed");
  CLI::App* eval = add("eval", "decode the test items with every final checkpoint");
  CLI::App* analyze = add("analyze", "accuracy, preference, correlation and KS tables");
  CLI::App* gnm = add("gnm", "GNM wordlikeness of the test items");
  CLI::App* regress = add("regress", "mixed-effects logistic regression on wordlikeness");
  CLI::App* report = add("report", "consolidated report against the published values");
  for (CLI::App* sc : {gen, train, eval, analyze, regress}) {
    sc->add_option("--condition", condition, "restrict to one frequency condition, e.g. C90L10NL");
    sc->add_option("--seed", seed, "restrict to one seed");
  }
  gen->add_option("--out", out, "data output root (default <workdir>/data)");
  train->add_option("--data", data, "data root written by gen (default <workdir>/data)");
  train->add_option("--updates", updates, "override train.max_updates")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);
  if (!condition.empty()) ov.condition = condition;
  if (seed != 0) ov.seed = seed;
  if (!out.empty()) ov.out = out;
  if (!data.empty()) ov.data = data;
  if (updates >= 0) ov.updates = updates;

  try {
    const Context ctx = Context::load(morphome::load_pipeline_config(config_path), &std::clog);
    ctx.say("workdir ", ctx.workdir().string());
    if (*gen) cmd_gen(ctx, ov);
    else if (*train) cmd_train(ctx, ov);
    else if (*eval) cmd_eval(ctx, ov);
    else if (*analyze) cmd_analyze(ctx, ov);
    else if (*gnm) cmd_gnm(ctx);
    else if (*regress) cmd_regress(ctx, ov);
    else if (*report) cmd_report(ctx);
  } catch (const morphome::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
