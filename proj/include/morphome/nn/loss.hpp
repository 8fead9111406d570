// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <vector>

#include "morphome/errors.hpp"
#include "morphome/nn/transformer.hpp"
#include "morphome/nn/vocab.hpp"

namespace morphome::nn {

template <class T>
struct LossResult {
  double loss = 0;     // mean over counted positions
  std::size_t count = 0;
  Mat<T> dlogits;      // d(loss)/d(logits); zero rows at PAD positions
};

// Row-wise log-softmax, computed in double.
template <class T>
Eigen::MatrixXd log_softmax(const Mat<T>& logits) {
  Eigen::MatrixXd lp = logits.template cast<double>();
  for (Index r = 0; r < lp.rows(); ++r) {
    const double mx = lp.row(r).maxCoeff();
    const double lse = mx + std::log((lp.row(r).array() - mx).exp().sum());
    lp.row(r).array() -= lse;
  }
  return lp;
}

// Label-smoothed cross-entropy. The target puts 1-eps on the gold class and
// eps/(V-1) on every other class; positions whose gold id is `pad_id` are
// skipped.
template <class T>
LossResult<T> label_smoothed_ce(const Mat<T>& logits, const std::vector<int>& gold, double eps, int pad_id = kPad) {
  if (static_cast<Index>(gold.size()) != logits.rows())
    throw ShapeMismatch("loss: " + std::to_string(gold.size()) + " gold ids for " + std::to_string(logits.rows()) +
                        " logit rows");
  const Index V = logits.cols();
  if (V < 2) throw ShapeMismatch("loss: need at least two classes");
  const Eigen::MatrixXd lp = log_softmax(logits);
  const double off = eps / static_cast<double>(V - 1);
  LossResult<T> res;
  res.dlogits = Mat<T>::Zero(logits.rows(), V);
  double total = 0;
  for (Index r = 0; r < logits.rows(); ++r) {
    const int g = gold[static_cast<std::size_t>(r)];
    if (g == pad_id) continue;
    if (g < 0 || g >= V) throw UnknownToken("loss: gold id out of range");
    const double row_sum = lp.row(r).sum();
    total += -(1.0 - eps) * lp(r, g) - off * (row_sum - lp(r, g));
    ++res.count;
  }
  if (res.count == 0) return res;
  const double inv = 1.0 / static_cast<double>(res.count);
  for (Index r = 0; r < logits.rows(); ++r) {
    const int g = gold[static_cast<std::size_t>(r)];
    if (g == pad_id) continue;
    for (Index c = 0; c < V; ++c) {
      const double q = c == g ? 1.0 - eps : off;
      res.dlogits(r, c) = static_cast<T>((std::exp(lp(r, c)) - q) * inv);
    }
  }
  res.loss = total * inv;
  return res;
}

}  // namespace morphome::nn
