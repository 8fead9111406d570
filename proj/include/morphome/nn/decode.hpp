// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <vector>

#include "morphome/errors.hpp"
#include "morphome/nn/loss.hpp"
#include "morphome/nn/transformer.hpp"
#include "morphome/nn/vocab.hpp"

namespace morphome::nn {

struct Hypothesis {
  std::vector<int> tokens;  // generated ids, ending in </s> when complete
  double score = 0;         // total log-probability
  bool complete = false;
};

struct BeamResult {
  std::vector<Hypothesis> hypotheses;  // best first
  bool no_complete_hypothesis = false; // true: hypotheses are partial
};

struct BeamOptions {
  int width = 5;
  int max_len = 32;  // generated tokens, </s> included
  bool length_normalize = false;
};

namespace detail {

inline double rank_score(const Hypothesis& h, bool normalize) {
  return normalize && !h.tokens.empty() ? h.score / static_cast<double>(h.tokens.size()) : h.score;
}

// Log-probabilities of the next token after each prefix, one row per prefix.
template <class T>
Eigen::MatrixXd next_token_logprobs(const Transformer<T>& model, const Mat<T>& memory,
                                    const std::vector<std::vector<int>>& prefixes) {
  std::vector<std::vector<int>> inputs;
  inputs.reserve(prefixes.size());
  for (const auto& p : prefixes) {
    std::vector<int> in{kBos};
    in.insert(in.end(), p.begin(), p.end());
    inputs.push_back(std::move(in));
  }
  const Segments mem = Segments::shared(prefixes.size(), memory.rows());
  const Mat<T> logits = model.decode(memory, mem, inputs, Mode::Eval, nullptr, nullptr);
  Mat<T> last(static_cast<Index>(prefixes.size()), logits.cols());
  Index row = -1;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    row += static_cast<Index>(inputs[i].size());
    last.row(static_cast<Index>(i)) = logits.row(row);
  }
  return log_softmax(last);
}

inline bool decodable(int tok) { return tok != kPad && tok != kBos; }

}  // namespace detail

template <class T>
std::vector<int> greedy_decode(const Transformer<T>& model, const std::vector<int>& src, int max_len) {
  const Mat<T> memory = model.encode({src}, Mode::Eval, nullptr, nullptr);
  std::vector<int> out;
  while (static_cast<int>(out.size()) < max_len) {
    const Eigen::MatrixXd lp = detail::next_token_logprobs(model, memory, {out});
    int best = -1;
    for (int t = 0; t < lp.cols(); ++t)
      if (detail::decodable(t) && (best < 0 || lp(0, t) > lp(0, best))) best = t;
    out.push_back(best);
    if (best == kEos) break;
  }
  return out;
}

// Breadth-limited search over the model's output distribution. At every step
// the `width` best extensions survive; those ending in </s> are set aside as
// complete. Search stops once `width` hypotheses are complete and no live
// prefix can still beat them, or at max_len.
template <class T>
BeamResult beam_decode(const Transformer<T>& model, const std::vector<int>& src, const BeamOptions& opt = {}) {
  if (opt.width < 1) throw ConfigError("beam_decode: width must be >= 1");
  const Mat<T> memory = model.encode({src}, Mode::Eval, nullptr, nullptr);
  const std::size_t width = static_cast<std::size_t>(opt.width);
  std::vector<Hypothesis> live{Hypothesis{}};
  std::vector<Hypothesis> done;

  struct Candidate {
    std::size_t parent;
    int token;
    double score;
  };

  for (int step = 0; step < opt.max_len && !live.empty(); ++step) {
    std::vector<std::vector<int>> prefixes;
    for (const auto& h : live) prefixes.push_back(h.tokens);
    const Eigen::MatrixXd lp = detail::next_token_logprobs(model, memory, prefixes);
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < live.size(); ++i)
      for (int t = 0; t < lp.cols(); ++t)
        if (detail::decodable(t)) cands.push_back({i, t, live[i].score + lp(static_cast<Index>(i), t)});
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.score > b.score; });
    if (cands.size() > width) cands.resize(width);

    std::vector<Hypothesis> next;
    for (const auto& c : cands) {
      Hypothesis h{live[c.parent].tokens, c.score, c.token == kEos};
      h.tokens.push_back(c.token);
      (h.complete ? done : next).push_back(std::move(h));
    }
    live = std::move(next);

    if (done.size() >= width && !live.empty() && !opt.length_normalize) {
      std::vector<double> scores;
      for (const auto& h : done) scores.push_back(h.score);
      std::nth_element(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(width - 1), scores.end(),
                       std::greater<>());
      const double kth = scores[width - 1];
      double best_live = live.front().score;
      for (const auto& h : live) best_live = std::max(best_live, h.score);
      // log-probabilities only decrease as a prefix grows
      if (best_live <= kth) break;
    } else if (done.size() >= width && opt.length_normalize) {
      break;
    }
  }

  BeamResult res;
  auto by_rank = [&](const Hypothesis& a, const Hypothesis& b) {
    return detail::rank_score(a, opt.length_normalize) > detail::rank_score(b, opt.length_normalize);
  };
  if (done.empty()) {
    res.no_complete_hypothesis = true;
    res.hypotheses = std::move(live);
  } else {
    res.hypotheses = std::move(done);
  }
  std::stable_sort(res.hypotheses.begin(), res.hypotheses.end(), by_rank);
  if (res.hypotheses.size() > width) res.hypotheses.resize(width);
  return res;
}

}  // namespace morphome::nn
