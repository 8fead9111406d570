// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include <json.hpp>

#include "morphome/errors.hpp"

namespace morphome::nn {

struct ModelConfig {
  int layers = 4;
  int heads = 4;
  int d_model = 256;
  int d_ff = 1024;
  double dropout = 0.1;
  int max_len = 64;

  void validate() const {
    if (layers < 1 || heads < 1 || d_model < 1 || d_ff < 1 || max_len < 2)
      throw ConfigError("model config: sizes must be positive");
    if (d_model % heads != 0) throw ConfigError("model config: d_model must be divisible by heads");
    if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("model config: dropout must lie in [0,1)");
  }
};

struct TrainConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double adam_eps = 1e-9;
  int warmup_updates = 0;  // 0: constant learning rate
  double label_smoothing = 0.1;
  double grad_clip_norm = 1.0;
  long max_updates = 10000;
  int checkpoint_every_epochs = 10;
  int batch_size = 400;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(lr > 0)) throw ConfigError("train config: lr must be positive");
    if (label_smoothing < 0 || label_smoothing >= 1) throw ConfigError("train config: label_smoothing in [0,1)");
    if (batch_size < 1) throw ConfigError("train config: batch_size must be positive");
    if (max_updates < 0) throw ConfigError("train config: max_updates must be >= 0");
    if (checkpoint_every_epochs < 0) throw ConfigError("train config: checkpoint_every_epochs must be >= 0");
  }
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ModelConfig, layers, heads, d_model, d_ff, dropout, max_len)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(TrainConfig, lr, beta1, beta2, adam_eps, warmup_updates,
                                                label_smoothing, grad_clip_norm, max_updates,
                                                checkpoint_every_epochs, batch_size, seed)

}  // namespace morphome::nn
