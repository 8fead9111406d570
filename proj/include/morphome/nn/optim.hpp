// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

#include "morphome/nn/config.hpp"
#include "morphome/nn/transformer.hpp"

namespace morphome::nn {

template <class T>
double global_norm(const ParamStore<T>& grads) {
  double sq = 0;
  for (const auto& g : grads.tensors) sq += g.template cast<double>().squaredNorm();
  return std::sqrt(sq);
}

// Rescales all gradients so their joint L2 norm is at most `max_norm`.
// Returns the norm before clipping.
template <class T>
double clip_global_norm(ParamStore<T>& grads, double max_norm) {
  const double norm = global_norm(grads);
  if (max_norm > 0 && norm > max_norm) {
    const T s = static_cast<T>(max_norm / norm);
    for (auto& g : grads.tensors) g *= s;
  }
  return norm;
}

template <class T>
class Adam {
 public:
  Adam() = default;
  Adam(const TrainConfig& tc, const ParamStore<T>& params)
      : lr_(tc.lr), b1_(tc.beta1), b2_(tc.beta2), eps_(tc.adam_eps), warmup_(tc.warmup_updates),
        m_(params.zeros_like()), v_(params.zeros_like()) {}

  long steps() const { return t_; }

  // Inverse-sqrt schedule when warmup is configured, constant otherwise.
  double rate() const {
    if (warmup_ <= 0) return lr_;
    const double step = static_cast<double>(t_);
    return lr_ * std::min(step / warmup_, std::sqrt(static_cast<double>(warmup_) / step));
  }

  void update(ParamStore<T>& params, const ParamStore<T>& grads) {
    ++t_;
    const double lr = rate();
    const T c1 = static_cast<T>(1.0 / (1.0 - std::pow(b1_, static_cast<double>(t_))));
    const T c2 = static_cast<T>(1.0 / (1.0 - std::pow(b2_, static_cast<double>(t_))));
    const T b1 = static_cast<T>(b1_), b2 = static_cast<T>(b2_), eps = static_cast<T>(eps_);
    for (std::size_t i = 0; i < params.size(); ++i) {
      auto m = m_[i].array();
      auto v = v_[i].array();
      const auto g = grads[i].array();
      m = b1 * m + (T(1) - b1) * g;
      v = b2 * v + (T(1) - b2) * g.square();
      params[i].array() -= static_cast<T>(lr) * (m * c1) / ((v * c2).sqrt() + eps);
    }
  }

 private:
  double lr_ = 1e-3, b1_ = 0.9, b2_ = 0.98, eps_ = 1e-9;
  int warmup_ = 0;
  long t_ = 0;
  ParamStore<T> m_, v_;
};

}  // namespace morphome::nn
