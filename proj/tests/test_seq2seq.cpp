// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numeric>

#include "morphome/nn/checkpoint.hpp"
#include "morphome/nn/decode.hpp"
#include "morphome/nn/loss.hpp"
#include "morphome/nn/optim.hpp"
#include "morphome/nn/trainer.hpp"
#include "nn_oracles.hpp"

using namespace morphome;
using namespace morphome::nn;

namespace {

ModelConfig tiny(int layers = 1, int d = 8, int heads = 2) {
  ModelConfig mc;
  mc.layers = layers;
  mc.heads = heads;
  mc.d_model = d;
  mc.d_ff = 2 * d;
  mc.dropout = 0.0;
  mc.max_len = 12;
  return mc;
}

Vocab small_vocab() { return Vocab({"a", "b", "c", "d"}); }

template <class T>
Transformer<T> random_model(std::uint64_t seed, const ModelConfig& mc = tiny(), int vocab = 7) {
  Transformer<T> m(mc, vocab);
  Rng rng(seed);
  m.init(rng);
  return m;
}

std::vector<Example> toy_data() {
  return {{{3, 4, kEos}, {4, 3}}, {{5, 6, 3, kEos}, {6, 5}}, {{4, kEos}, {3, 3, 3}}, {{6, 6, kEos}, {5}}};
}

PackedBatch toy_batch() {
  static const auto data = toy_data();
  std::vector<const Example*> ptrs;
  for (const auto& e : data) ptrs.push_back(&e);
  return pack(ptrs);
}

bool same_params(const ParamStore<float>& a, const ParamStore<float>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Forward pass

TEST(Transformer, ZeroParametersGiveUniformLogits) {
  Transformer<double> m(tiny(), 7);  // never initialised: weights zero, gains one
  const auto b = toy_batch();
  const Mat<double> logits = m.forward(b.src, b.tgt_in, Mode::Eval, nullptr, nullptr);
  EXPECT_EQ(logits.cols(), 7);
  EXPECT_EQ(logits.maxCoeff(), 0.0);
  EXPECT_EQ(logits.minCoeff(), 0.0);
  EXPECT_NEAR(label_smoothed_ce(logits, b.gold, 0.1).loss, std::log(7.0), 1e-12);
}

TEST(Transformer, EvalForwardIsBitIdentical) {
  const auto m = random_model<float>(3);
  const auto b = toy_batch();
  const Mat<float> x = m.forward(b.src, b.tgt_in, Mode::Eval, nullptr, nullptr);
  const Mat<float> y = m.forward(b.src, b.tgt_in, Mode::Eval, nullptr, nullptr);
  EXPECT_EQ(x, y);
}

TEST(Transformer, PackedBatchMatchesSingleExamples) {
  const auto m = random_model<double>(5);
  const auto b = toy_batch();
  const Mat<double> all = m.forward(b.src, b.tgt_in, Mode::Eval, nullptr, nullptr);
  Index row = 0;
  for (std::size_t i = 0; i < b.src.size(); ++i) {
    const Mat<double> one = m.forward({b.src[i]}, {b.tgt_in[i]}, Mode::Eval, nullptr, nullptr);
    EXPECT_LT((all.middleRows(row, one.rows()) - one).cwiseAbs().maxCoeff(), 1e-12) << "example " << i;
    row += one.rows();
  }
}

TEST(Transformer, AttentionRowsAreDistributionsAndCausal) {
  const auto m = random_model<double>(11, tiny(2));
  const auto b = toy_batch();
  Tape<double> tape;
  m.forward(b.src, b.tgt_in, Mode::Eval, nullptr, &tape);
  auto check_rows = [](const std::vector<Mat<double>>& probs) {
    for (const auto& p : probs) {
      for (Index r = 0; r < p.rows(); ++r) EXPECT_NEAR(p.row(r).sum(), 1.0, 1e-12);
      EXPECT_GE(p.minCoeff(), 0.0);
    }
  };
  for (const auto& layer : tape.enc) check_rows(layer.self.probs);
  for (const auto& layer : tape.dec) {
    check_rows(layer.self.probs);
    check_rows(layer.cross.probs);
    for (const auto& p : layer.self.probs)
      for (Index r = 0; r < p.rows(); ++r)
        for (Index c = r + 1; c < p.cols(); ++c) EXPECT_EQ(p(r, c), 0.0);
  }
}

TEST(Transformer, FutureTokensDoNotChangeEarlierLogits) {
  const auto m = random_model<double>(13);
  const std::vector<int> src{3, 4, 5, kEos};
  const Mat<double> a = m.forward({src}, {{kBos, 3, 4}}, Mode::Eval, nullptr, nullptr);
  const Mat<double> b = m.forward({src}, {{kBos, 3, 6}}, Mode::Eval, nullptr, nullptr);
  EXPECT_EQ(a.topRows(2), b.topRows(2));
  EXPECT_NE(a.row(2), b.row(2));
}

TEST(Transformer, InputValidation) {
  const auto m = random_model<float>(1);
  EXPECT_THROW(m.forward({{3, kEos}}, {{kBos, 99}}, Mode::Eval, nullptr, nullptr), UnknownToken);
  EXPECT_THROW(m.forward({{-1, kEos}}, {{kBos}}, Mode::Eval, nullptr, nullptr), UnknownToken);
  EXPECT_THROW(m.forward({std::vector<int>(13, 3)}, {{kBos}}, Mode::Eval, nullptr, nullptr), LengthExceeded);
  EXPECT_THROW(m.forward({{}}, {{kBos}}, Mode::Eval, nullptr, nullptr), LengthExceeded);
  EXPECT_THROW(m.forward({{3}, {4}}, {{kBos}}, Mode::Eval, nullptr, nullptr), ShapeMismatch);
}

TEST(Transformer, ConfigValidation) {
  ModelConfig mc = tiny();
  mc.heads = 3;
  EXPECT_THROW(Transformer<float>(mc, 7), ConfigError);
  EXPECT_THROW(Transformer<float>(tiny(), 3), ConfigError);
  mc = tiny();
  mc.dropout = 1.0;
  EXPECT_THROW(Transformer<float>(mc, 7), ConfigError);
}

TEST(Transformer, DropoutOnlyInTraining) {
  ModelConfig mc = tiny();
  mc.dropout = 0.3;
  const auto m = random_model<double>(2, mc);
  const auto b = toy_batch();
  Rng r1(9), r2(9);
  const Mat<double> e = m.forward(b.src, b.tgt_in, Mode::Eval, nullptr, nullptr);
  const Mat<double> t1 = m.forward(b.src, b.tgt_in, Mode::Train, &r1, nullptr);
  const Mat<double> t2 = m.forward(b.src, b.tgt_in, Mode::Train, &r2, nullptr);
  EXPECT_EQ(t1, t2);
  EXPECT_NE(e, t1);
  EXPECT_THROW(m.forward(b.src, b.tgt_in, Mode::Train, nullptr, nullptr), ConfigError);
}

// ---------------------------------------------------------------------------
// Loss

TEST(Loss, UniformLogitsGiveLogV) {
  for (int V : {2, 5, 31}) {
    const Mat<double> z = Mat<double>::Zero(3, V);
    for (double eps : {0.0, 0.1, 0.5}) EXPECT_NEAR(label_smoothed_ce(z, {1, 1, 1}, eps).loss, std::log(V), 1e-12);
  }
}

TEST(Loss, ConfidentCorrectNearZeroWithoutSmoothing) {
  Mat<double> z = Mat<double>::Zero(2, 6);
  z(0, 3) = 100;
  z(1, 4) = 100;
  EXPECT_LT(label_smoothed_ce(z, {3, 4}, 0.0).loss, 1e-30);
}

TEST(Loss, MatchesFormulaAndEntropyBound) {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const int V = 3 + static_cast<int>(uniform_index(rng, 8));
    const int R = 1 + static_cast<int>(uniform_index(rng, 4));
    const double eps = uniform01(rng) * 0.5;
    Mat<double> z(R, V);
    for (Index k = 0; k < z.size(); ++k) z.data()[k] = 4 * standard_normal(rng);
    std::vector<int> gold;
    for (int r = 0; r < R; ++r) gold.push_back(1 + static_cast<int>(uniform_index(rng, V - 1)));
    double expect = 0;
    for (int r = 0; r < R; ++r) {
      double zsum = 0;
      for (int c = 0; c < V; ++c) zsum += std::exp(z(r, c));
      double nll_other = 0;
      for (int c = 0; c < V; ++c)
        if (c != gold[r]) nll_other += -(z(r, c) - std::log(zsum));
      expect += eps / (V - 1) * nll_other + (1 - eps) * -(z(r, gold[r]) - std::log(zsum));
    }
    expect /= R;
    const double got = label_smoothed_ce(z, gold, eps).loss;
    EXPECT_NEAR(got, expect, 1e-10);
    // cross-entropy is at least the entropy of the smoothed target
    double h = 0;
    if (eps > 0) h -= eps * std::log(eps / (V - 1));
    if (eps < 1) h -= (1 - eps) * std::log(1 - eps);
    EXPECT_GE(got, h - 1e-12);
  }
}

TEST(Loss, GradientMatchesFiniteDifferences) {
  Rng rng(8);
  Mat<double> z(3, 5);
  for (Index k = 0; k < z.size(); ++k) z.data()[k] = standard_normal(rng);
  const std::vector<int> gold{2, kPad, 4};
  const auto res = label_smoothed_ce(z, gold, 0.1);
  EXPECT_EQ(res.count, 2u);
  EXPECT_EQ(res.dlogits.row(1).cwiseAbs().sum(), 0.0);
  for (Index k = 0; k < z.size(); ++k) {
    Mat<double> up = z, down = z;
    up.data()[k] += 1e-6;
    down.data()[k] -= 1e-6;
    const double num = (label_smoothed_ce(up, gold, 0.1).loss - label_smoothed_ce(down, gold, 0.1).loss) / 2e-6;
    EXPECT_NEAR(res.dlogits.data()[k], num, 1e-8);
  }
}

TEST(Loss, Errors) {
  const Mat<double> z = Mat<double>::Zero(2, 5);
  EXPECT_THROW(label_smoothed_ce(z, {1}, 0.1), ShapeMismatch);
  EXPECT_THROW(label_smoothed_ce(z, {1, 7}, 0.1), UnknownToken);
  EXPECT_EQ(label_smoothed_ce(z, {kPad, kPad}, 0.1).count, 0u);
}

// ---------------------------------------------------------------------------
// Gradients and optimiser

TEST(Backward, MatchesCentralDifferences) {
  auto m = random_model<double>(17, tiny(1, 8, 2));
  const auto r = morphome::testing::gradient_check(m, toy_batch(), 0.1);
  EXPECT_GT(r.checked, 1000u);
  EXPECT_LT(r.max_rel_error, 1e-4);
}

TEST(Optim, ClipScalesToMaxNorm) {
  ParamStore<double> g;
  g.add("a", 1, 2);
  g.add("b", 1, 1);
  g[0] << 6, 0;
  g[1] << 8;
  EXPECT_DOUBLE_EQ(global_norm(g), 10.0);
  EXPECT_DOUBLE_EQ(clip_global_norm(g, 1.0), 10.0);
  EXPECT_NEAR(g[0](0, 0), 0.6, 1e-15);
  EXPECT_NEAR(g[1](0, 0), 0.8, 1e-15);
  EXPECT_NEAR(global_norm(g), 1.0, 1e-15);
  clip_global_norm(g, 5.0);  // below the cap: untouched
  EXPECT_NEAR(g[1](0, 0), 0.8, 1e-15);
}

TEST(Optim, FirstAdamStepIsLearningRateTimesSign) {
  TrainConfig tc;
  tc.lr = 0.01;
  ParamStore<double> p;
  p.add("w", 1, 3);
  auto g = p.zeros_like();
  g[0] << 2.0, -0.5, 0.0;
  Adam<double> adam(tc, p);
  adam.update(p, g);
  EXPECT_NEAR(p[0](0, 0), -0.01, 1e-9);
  EXPECT_NEAR(p[0](0, 1), 0.01, 1e-9);
  EXPECT_EQ(p[0](0, 2), 0.0);
}

TEST(Optim, WarmupSchedule) {
  TrainConfig tc;
  tc.lr = 1.0;
  tc.warmup_updates = 4;
  ParamStore<double> p;
  p.add("w", 1, 1);
  Adam<double> adam(tc, p);
  const auto g = p.zeros_like();
  std::vector<double> rates;
  for (int i = 0; i < 16; ++i) {
    adam.update(p, g);
    rates.push_back(adam.rate());
  }
  EXPECT_DOUBLE_EQ(rates[0], 0.25);
  EXPECT_DOUBLE_EQ(rates[3], 1.0);
  EXPECT_DOUBLE_EQ(rates[15], 0.5);
}

// ---------------------------------------------------------------------------
// Training

TEST(Trainer, SeededRunsAreIdentical) {
  TrainConfig tc;
  tc.batch_size = 2;
  tc.max_updates = 6;
  tc.seed = 5;
  ModelConfig mc = tiny();
  mc.dropout = 0.1;
  Trainer<float> a(mc, tc, small_vocab()), b(mc, tc, small_vocab());
  const auto la = a.train(toy_data());
  const auto lb = b.train(toy_data());
  EXPECT_TRUE(same_params(a.model().params(), b.model().params()));
  ASSERT_EQ(la.size(), lb.size());
  EXPECT_EQ(la.back().loss, lb.back().loss);
  tc.seed = 6;
  Trainer<float> c(mc, tc, small_vocab());
  c.train(toy_data());
  EXPECT_FALSE(same_params(a.model().params(), c.model().params()));
}

TEST(Trainer, CheckpointHookCadence) {
  TrainConfig tc;
  tc.batch_size = 2;  // two updates per epoch
  tc.max_updates = 9;
  tc.checkpoint_every_epochs = 2;
  Trainer<float> t(tiny(), tc, small_vocab());
  std::vector<std::pair<long, bool>> seen;
  Trainer<float>::Hooks hooks;
  hooks.on_checkpoint = [&](const Checkpoint<float>& ck, bool fin) { seen.emplace_back(ck.update, fin); };
  t.train(toy_data(), hooks);
  ASSERT_EQ(seen.size(), 3u);
  EXPECT_EQ(seen[0], std::make_pair(4L, false));
  EXPECT_EQ(seen[1], std::make_pair(8L, false));
  EXPECT_EQ(seen[2], std::make_pair(9L, true));
}

TEST(Trainer, LearnsToyMapping) {
  TrainConfig tc;
  tc.batch_size = 4;
  tc.max_updates = 300;
  tc.label_smoothing = 0.0;
  tc.lr = 0.01;
  Trainer<float> t(tiny(1, 16, 2), tc, small_vocab());
  const auto data = toy_data();
  t.train(data);
  for (const auto& e : data) {
    auto out = greedy_decode(t.model(), e.src, 8);
    ASSERT_EQ(out.back(), kEos);
    out.pop_back();
    EXPECT_EQ(out, e.tgt);
  }
}

TEST(Trainer, Errors) {
  TrainConfig tc;
  tc.lr = 0;
  EXPECT_THROW(Trainer<float>(tiny(), tc, small_vocab()), ConfigError);
  tc = TrainConfig{};
  Trainer<float> t(tiny(), tc, small_vocab());
  EXPECT_THROW(t.train({}), DataError);
  EXPECT_THROW(t.train_step({}), DataError);
}

// ---------------------------------------------------------------------------
// Checkpoints

TEST(Checkpoint, RoundTripIsBitIdentical) {
  TrainConfig tc;
  tc.batch_size = 2;
  tc.max_updates = 3;
  Trainer<float> t(tiny(), tc, small_vocab());
  t.train(toy_data());
  const auto path = (std::filesystem::temp_directory_path() / "morphome_ckpt_test.bin").string();
  save_checkpoint(path, t.checkpoint());
  const auto ck = load_checkpoint<float>(path);
  EXPECT_EQ(ck.update, 3);
  EXPECT_EQ(ck.vocab, small_vocab());
  EXPECT_EQ(ck.train_config.batch_size, 2);
  EXPECT_EQ(ck.rng_state, rng_state(t.rng()));
  const auto b = toy_batch();
  EXPECT_EQ(ck.model.forward(b.src, b.tgt_in, Mode::Eval, nullptr, nullptr),
            t.model().forward(b.src, b.tgt_in, Mode::Eval, nullptr, nullptr));
  // widening to double is exact
  const auto wide = load_checkpoint<double>(path);
  EXPECT_EQ(wide.model.params()[0], t.model().params()[0].cast<double>());
  std::filesystem::remove(path);
}

TEST(Checkpoint, RejectsForeignFiles) {
  const auto path = (std::filesystem::temp_directory_path() / "morphome_not_ckpt.bin").string();
  {
    std::ofstream out(path);
    out << "this is not a checkpoint at all";
  }
  EXPECT_THROW(load_checkpoint<float>(path), DataError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_checkpoint<float>(path), DataError);
}

// ---------------------------------------------------------------------------
// Decoding

TEST(Decode, WidthOneEqualsGreedy) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto m = random_model<float>(100 + s);
    const std::vector<int> src{3, 4, 5, kEos};
    const auto g = greedy_decode(m, src, 6);
    const auto b = beam_decode(m, src, {1, 6, false});
    ASSERT_EQ(b.hypotheses.size(), 1u);
    EXPECT_EQ(b.hypotheses[0].tokens, g);
    EXPECT_EQ(b.no_complete_hypothesis, g.back() != kEos);
  }
}

TEST(Decode, ScoresAreSortedAndMatchTeacherForcing) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto m = random_model<double>(200 + s);
    const std::vector<int> src{6, 3, kEos};
    const auto res = beam_decode(m, src, {5, 8, false});
    ASSERT_FALSE(res.hypotheses.empty());
    for (std::size_t i = 1; i < res.hypotheses.size(); ++i)
      EXPECT_GE(res.hypotheses[i - 1].score, res.hypotheses[i].score);
    for (const auto& h : res.hypotheses) {
      if (!h.complete) continue;
      EXPECT_NEAR(h.score, morphome::testing::sequence_logprob(m, src, h.tokens), 1e-9);
      EXPECT_EQ(std::count(h.tokens.begin(), h.tokens.end(), kBos), 0);
      EXPECT_EQ(std::count(h.tokens.begin(), h.tokens.end(), kPad), 0);
    }
  }
}

TEST(Decode, ExhaustiveWidthFindsArgmax) {
  const auto m = random_model<double>(77, tiny(), 5);  // decodable: 3, 4, </s>
  const std::vector<int> src{3, 4, kEos};
  const auto best = morphome::testing::brute_force_argmax(m, src, {3, 4}, 4);
  const auto res = beam_decode(m, src, {81, 4, false});
  ASSERT_FALSE(res.no_complete_hypothesis);
  EXPECT_EQ(res.hypotheses[0].tokens, best.tokens);
}

TEST(Decode, Errors) {
  const auto m = random_model<float>(1);
  EXPECT_THROW(beam_decode(m, {3, kEos}, {0, 5, false}), ConfigError);
  EXPECT_THROW(beam_decode(m, {3, 42, kEos}, {2, 5, false}), UnknownToken);
}

TEST(Vocab, SpecialsAndCodec) {
  const Vocab v = small_vocab();
  EXPECT_EQ(v.size(), 7);
  EXPECT_EQ(v.id("<pad>"), kPad);
  EXPECT_EQ(v.id("<s>"), kBos);
  EXPECT_EQ(v.id("</s>"), kEos);
  EXPECT_EQ(v.decode({kBos, 3, 4, kEos, 5}), (std::vector<std::string>{"a", "b"}));
  EXPECT_THROW(v.id("zz"), UnknownToken);
  EXPECT_THROW(Vocab({"a", "a"}), ConfigError);
}
