// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "morphome/errors.hpp"
#include "morphome/nn/checkpoint.hpp"
#include "morphome/nn/config.hpp"
#include "morphome/nn/loss.hpp"
#include "morphome/nn/optim.hpp"
#include "morphome/nn/transformer.hpp"
#include "morphome/nn/vocab.hpp"
#include "morphome/random.hpp"

namespace morphome::nn {

struct StepStats {
  double loss = 0;
  double grad_norm = 0;  // before clipping
};

struct LogRow {
  long update = 0;
  int epoch = 0;
  double loss = 0;
  double grad_norm = 0;
};

inline std::string training_log_csv(const std::vector<LogRow>& rows) {
  std::ostringstream os;
  os << "update,epoch,loss,grad_norm\n";
  os.precision(9);
  for (const auto& r : rows) os << r.update << ',' << r.epoch << ',' << r.loss << ',' << r.grad_norm << '\n';
  return os.str();
}

// Teacher-forced inputs and gold outputs for a batch.
struct PackedBatch {
  std::vector<std::vector<int>> src, tgt_in;
  std::vector<int> gold;
};

inline PackedBatch pack(const std::vector<const Example*>& batch) {
  PackedBatch b;
  for (const Example* e : batch) {
    b.src.push_back(e->src);
    std::vector<int> in{kBos};
    in.insert(in.end(), e->tgt.begin(), e->tgt.end());
    b.tgt_in.push_back(std::move(in));
    b.gold.insert(b.gold.end(), e->tgt.begin(), e->tgt.end());
    b.gold.push_back(kEos);
  }
  return b;
}

// Mean label-smoothed loss of a batch and its parameter gradient.
template <class T>
double loss_and_gradient(const Transformer<T>& model, const PackedBatch& b, double smoothing, Mode mode, Rng* rng,
                         ParamStore<T>& grads) {
  Tape<T> tape;
  const Mat<T> logits = model.forward(b.src, b.tgt_in, mode, rng, &tape);
  const auto lr = label_smoothed_ce(logits, b.gold, smoothing);
  model.backward(tape, lr.dlogits, grads);
  return lr.loss;
}

template <class T>
class Trainer {
 public:
  Trainer(const ModelConfig& mc, const TrainConfig& tc, Vocab vocab)
      : tc_(tc), vocab_(std::move(vocab)), rng_(tc.seed), model_(mc, vocab_.size()) {
    tc_.validate();
    model_.init(rng_);
    adam_ = Adam<T>(tc_, model_.params());
    grads_ = model_.params().zeros_like();
  }

  Transformer<T>& model() { return model_; }
  const Transformer<T>& model() const { return model_; }
  const TrainConfig& train_config() const { return tc_; }
  const Vocab& vocab() const { return vocab_; }
  long updates() const { return updates_; }
  int epoch() const { return epoch_; }
  Rng& rng() { return rng_; }

  // One optimizer update: backprop, global-norm clip, Adam.
  StepStats train_step(const std::vector<const Example*>& batch) {
    if (batch.empty()) throw DataError("train_step: empty batch");
    grads_.set_zero();
    StepStats st;
    st.loss = loss_and_gradient(model_, pack(batch), tc_.label_smoothing, Mode::Train, &rng_, grads_);
    st.grad_norm = clip_global_norm(grads_, tc_.grad_clip_norm);
    if (!std::isfinite(st.loss) || !std::isfinite(st.grad_norm)) {
      std::ostringstream os;
      os << "non-finite training loss at update " << updates_ + 1 << " (loss=" << st.loss
         << ", grad_norm=" << st.grad_norm << ", batch=" << batch.size() << ")";
      throw NonFiniteLoss(os.str());
    }
    adam_.update(model_.params(), grads_);
    ++updates_;
    return st;
  }

  Checkpoint<T> checkpoint() const {
    return Checkpoint<T>{tc_, vocab_, updates_, epoch_, rng_state(rng_), model_};
  }

  struct Hooks {
    std::function<void(const Checkpoint<T>&, bool is_final)> on_checkpoint;
    std::function<void(const LogRow&)> on_log;
    long log_every = 100;
  };

  // Runs until max_updates, one shuffled pass over `data` per epoch. A
  // checkpoint is emitted every `checkpoint_every_epochs` completed epochs
  // and once at the end.
  std::vector<LogRow> train(const std::vector<Example>& data, const Hooks& hooks = {}) {
    if (data.empty()) throw DataError("train: empty training set");
    std::vector<LogRow> log;
    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const std::size_t bs = static_cast<std::size_t>(tc_.batch_size);
    double window_loss = 0, window_norm = 0;
    long window = 0;
    while (updates_ < tc_.max_updates) {
      shuffle(order, rng_);
      for (std::size_t start = 0; start < order.size() && updates_ < tc_.max_updates; start += bs) {
        std::vector<const Example*> batch;
        for (std::size_t k = start; k < std::min(start + bs, order.size()); ++k) batch.push_back(&data[order[k]]);
        const StepStats st = train_step(batch);
        window_loss += st.loss;
        window_norm += st.grad_norm;
        ++window;
        if (updates_ % std::max(1L, hooks.log_every) == 0 || updates_ == tc_.max_updates) {
          LogRow row{updates_, epoch_, window_loss / window, window_norm / window};
          log.push_back(row);
          if (hooks.on_log) hooks.on_log(row);
          window_loss = window_norm = 0;
          window = 0;
        }
      }
      ++epoch_;
      if (hooks.on_checkpoint && tc_.checkpoint_every_epochs > 0 && epoch_ % tc_.checkpoint_every_epochs == 0 &&
          updates_ < tc_.max_updates)
        hooks.on_checkpoint(checkpoint(), false);
    }
    if (hooks.on_checkpoint) hooks.on_checkpoint(checkpoint(), true);
    return log;
  }

 private:
  TrainConfig tc_;
  Vocab vocab_;
  Rng rng_;
  Transformer<T> model_;
  Adam<T> adam_;
  ParamStore<T> grads_;
  long updates_ = 0;
  int epoch_ = 0;
};

}  // namespace morphome::nn
