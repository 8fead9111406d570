// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Character-level encoder-decoder transformer with hand-written backward
// passes. Pre-norm residual blocks, fixed sinusoidal positions, ReLU
// feed-forward. Sequences in a batch are packed row-wise (no padding); each
// example only attends within its own segment.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "morphome/errors.hpp"
#include "morphome/nn/config.hpp"
#include "morphome/nn/vocab.hpp"
#include "morphome/random.hpp"

namespace morphome::nn {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class T>
using ColVec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

struct Segments {
  std::vector<Index> offset;
  std::vector<Index> length;
  Index total = 0;

  std::size_t size() const { return offset.size(); }

  template <class Seq>
  static Segments of(const std::vector<Seq>& seqs) {
    Segments s;
    for (const auto& q : seqs) {
      s.offset.push_back(s.total);
      s.length.push_back(static_cast<Index>(q.size()));
      s.total += static_cast<Index>(q.size());
    }
    return s;
  }

  // n segments that all alias rows [0, len).
  static Segments shared(std::size_t n, Index len) {
    Segments s;
    s.offset.assign(n, 0);
    s.length.assign(n, len);
    s.total = len;
    return s;
  }
};

template <class T>
struct ParamStore {
  std::vector<std::string> names;
  std::vector<Mat<T>> tensors;

  std::size_t add(std::string name, Index rows, Index cols) {
    names.push_back(std::move(name));
    tensors.push_back(Mat<T>::Zero(rows, cols));
    return tensors.size() - 1;
  }

  std::size_t size() const { return tensors.size(); }
  Mat<T>& operator[](std::size_t i) { return tensors[i]; }
  const Mat<T>& operator[](std::size_t i) const { return tensors[i]; }

  std::size_t numel() const {
    std::size_t n = 0;
    for (const auto& t : tensors) n += static_cast<std::size_t>(t.size());
    return n;
  }

  ParamStore zeros_like() const {
    ParamStore z;
    z.names = names;
    for (const auto& t : tensors) z.tensors.push_back(Mat<T>::Zero(t.rows(), t.cols()));
    return z;
  }

  void set_zero() {
    for (auto& t : tensors) t.setZero();
  }
};

struct LinearIx {
  std::size_t w = 0, b = 0;
};
struct NormIx {
  std::size_t g = 0, b = 0;
};
struct AttnIx {
  LinearIx q, k, v, o;
};
struct FfnIx {
  LinearIx in, out;
};
struct EncLayerIx {
  NormIx n1;
  AttnIx self;
  NormIx n2;
  FfnIx ff;
};
struct DecLayerIx {
  NormIx n1;
  AttnIx self;
  NormIx n2;
  AttnIx cross;
  NormIx n3;
  FfnIx ff;
};

template <class T>
struct NormCache {
  Mat<T> xhat;
  ColVec<T> inv_std;
};

template <class T>
struct AttnCache {
  Mat<T> q_in, kv_in, Q, K, V, ctx;
  std::vector<Mat<T>> probs;  // [segment * heads + head]
  Segments qs, ks;
  bool causal = false;
};

template <class T>
struct FfnCache {
  Mat<T> x, h;
};

template <class T>
struct DropCache {
  Mat<T> mask;  // empty: dropout inactive
};

template <class T>
struct EncLayerCache {
  NormCache<T> n1;
  AttnCache<T> self;
  DropCache<T> d1;
  NormCache<T> n2;
  FfnCache<T> ff;
  DropCache<T> d2;
};

template <class T>
struct DecLayerCache {
  NormCache<T> n1;
  AttnCache<T> self;
  DropCache<T> d1;
  NormCache<T> n2;
  AttnCache<T> cross;
  DropCache<T> d2;
  NormCache<T> n3;
  FfnCache<T> ff;
  DropCache<T> d3;
};

// Everything the backward pass needs from one forward pass.
template <class T>
struct Tape {
  Segments src, tgt;
  std::vector<int> src_tokens, tgt_tokens;
  DropCache<T> enc_drop, dec_drop;
  std::vector<EncLayerCache<T>> enc;
  NormCache<T> enc_norm;
  std::vector<DecLayerCache<T>> dec;
  NormCache<T> dec_norm;
  Mat<T> dec_out;
};

enum class Mode { Eval, Train };

template <class T>
class Transformer {
 public:
  Transformer() = default;

  Transformer(const ModelConfig& cfg, int vocab_size) : cfg_(cfg), vocab_size_(vocab_size) {
    cfg_.validate();
    if (vocab_size < 4) throw ConfigError("transformer: vocabulary too small");
    const Index d = cfg_.d_model, f = cfg_.d_ff, v = vocab_size;
    embed_ = p_.add("embed", v, d);
    auto linear = [&](const std::string& n, Index in, Index out) {
      return LinearIx{p_.add(n + ".w", in, out), p_.add(n + ".b", 1, out)};
    };
    auto norm = [&](const std::string& n) { return NormIx{p_.add(n + ".g", 1, d), p_.add(n + ".b", 1, d)}; };
    auto attn = [&](const std::string& n) {
      return AttnIx{linear(n + ".q", d, d), linear(n + ".k", d, d), linear(n + ".v", d, d), linear(n + ".o", d, d)};
    };
    auto ffn = [&](const std::string& n) { return FfnIx{linear(n + ".in", d, f), linear(n + ".out", f, d)}; };
    for (int l = 0; l < cfg_.layers; ++l) {
      const std::string n = "enc" + std::to_string(l);
      enc_.push_back({norm(n + ".n1"), attn(n + ".self"), norm(n + ".n2"), ffn(n + ".ff")});
    }
    enc_norm_ = norm("enc.norm");
    for (int l = 0; l < cfg_.layers; ++l) {
      const std::string n = "dec" + std::to_string(l);
      dec_.push_back({norm(n + ".n1"), attn(n + ".self"), norm(n + ".n2"), attn(n + ".cross"), norm(n + ".n3"),
                      ffn(n + ".ff")});
    }
    dec_norm_ = norm("dec.norm");
    out_ = linear("out", d, v);
    for (std::size_t i = 0; i < p_.size(); ++i)
      if (p_.names[i].ends_with(".g")) p_[i].setOnes();
    build_positions();
  }

  const ModelConfig& config() const { return cfg_; }
  int vocab_size() const { return vocab_size_; }
  ParamStore<T>& params() { return p_; }
  const ParamStore<T>& params() const { return p_; }

  // Xavier-uniform projections, N(0, d^-1/2) embeddings, zero biases, unit gains.
  void init(Rng& rng) {
    for (std::size_t i = 0; i < p_.size(); ++i) {
      Mat<T>& t = p_[i];
      const std::string& n = p_.names[i];
      if (n.ends_with(".g")) {
        t.setOnes();
      } else if (n.ends_with(".b")) {
        t.setZero();
      } else if (n == "embed") {
        const double sd = 1.0 / std::sqrt(static_cast<double>(cfg_.d_model));
        for (Index k = 0; k < t.size(); ++k) t.data()[k] = static_cast<T>(sd * standard_normal(rng));
      } else {
        const double a = std::sqrt(6.0 / static_cast<double>(t.rows() + t.cols()));
        for (Index k = 0; k < t.size(); ++k) t.data()[k] = static_cast<T>(a * (2.0 * uniform01(rng) - 1.0));
      }
    }
  }

  void validate(const std::vector<int>& seq, bool allow_empty = false) const {
    if (seq.empty() && !allow_empty) throw LengthExceeded("empty token sequence");
    if (static_cast<int>(seq.size()) > cfg_.max_len)
      throw LengthExceeded("sequence of length " + std::to_string(seq.size()) + " exceeds max_len " +
                           std::to_string(cfg_.max_len));
    for (int t : seq)
      if (t < 0 || t >= vocab_size_) throw UnknownToken("token id " + std::to_string(t) + " outside vocabulary");
  }

  // Encoder over packed sources. Returns (total_src_tokens x d_model).
  Mat<T> encode(const std::vector<std::vector<int>>& src, Mode mode, Rng* rng, Tape<T>* tape) const {
    for (const auto& s : src) validate(s);
    Segments segs = Segments::of(src);
    std::vector<int> toks = flatten(src);
    Mat<T> x = embed(toks, segs);
    DropCache<T>* dc = tape ? &tape->enc_drop : nullptr;
    x = dropout(x, mode, rng, dc);
    if (tape) {
      tape->src = segs;
      tape->src_tokens = toks;
      tape->enc.assign(enc_.size(), {});
    }
    for (std::size_t l = 0; l < enc_.size(); ++l) {
      const auto& ix = enc_[l];
      EncLayerCache<T>* c = tape ? &tape->enc[l] : nullptr;
      Mat<T> h = layer_norm(x, ix.n1, c ? &c->n1 : nullptr);
      Mat<T> a = attention(ix.self, h, h, segs, segs, false, c ? &c->self : nullptr);
      x += dropout(a, mode, rng, c ? &c->d1 : nullptr);
      h = layer_norm(x, ix.n2, c ? &c->n2 : nullptr);
      Mat<T> f = ffn(ix.ff, h, c ? &c->ff : nullptr);
      x += dropout(f, mode, rng, c ? &c->d2 : nullptr);
    }
    return layer_norm(x, enc_norm_, tape ? &tape->enc_norm : nullptr);
  }

  // Decoder logits for packed prefixes (each starting with <s>) attending to
  // `memory` rows given by `mem_segs`. Returns (total_tgt_tokens x vocab).
  Mat<T> decode(const Mat<T>& memory, const Segments& mem_segs, const std::vector<std::vector<int>>& tgt_in,
                Mode mode, Rng* rng, Tape<T>* tape) const {
    for (const auto& t : tgt_in) validate(t);
    if (mem_segs.size() != tgt_in.size()) throw ShapeMismatch("decode: memory/target batch mismatch");
    Segments segs = Segments::of(tgt_in);
    std::vector<int> toks = flatten(tgt_in);
    Mat<T> y = embed(toks, segs);
    y = dropout(y, mode, rng, tape ? &tape->dec_drop : nullptr);
    if (tape) {
      tape->tgt = segs;
      tape->tgt_tokens = toks;
      tape->dec.assign(dec_.size(), {});
    }
    for (std::size_t l = 0; l < dec_.size(); ++l) {
      const auto& ix = dec_[l];
      DecLayerCache<T>* c = tape ? &tape->dec[l] : nullptr;
      Mat<T> h = layer_norm(y, ix.n1, c ? &c->n1 : nullptr);
      Mat<T> a = attention(ix.self, h, h, segs, segs, true, c ? &c->self : nullptr);
      y += dropout(a, mode, rng, c ? &c->d1 : nullptr);
      h = layer_norm(y, ix.n2, c ? &c->n2 : nullptr);
      a = attention(ix.cross, h, memory, segs, mem_segs, false, c ? &c->cross : nullptr);
      y += dropout(a, mode, rng, c ? &c->d2 : nullptr);
      h = layer_norm(y, ix.n3, c ? &c->n3 : nullptr);
      Mat<T> f = ffn(ix.ff, h, c ? &c->ff : nullptr);
      y += dropout(f, mode, rng, c ? &c->d3 : nullptr);
    }
    Mat<T> z = layer_norm(y, dec_norm_, tape ? &tape->dec_norm : nullptr);
    Mat<T> logits = linear(z, out_);
    if (tape) tape->dec_out = std::move(z);
    return logits;
  }

  // Teacher-forced logits for a batch; row r of the result belongs to the
  // r-th packed target position.
  Mat<T> forward(const std::vector<std::vector<int>>& src, const std::vector<std::vector<int>>& tgt_in, Mode mode,
                 Rng* rng, Tape<T>* tape) const {
    if (src.size() != tgt_in.size()) throw ShapeMismatch("forward: source/target batch mismatch");
    if (mode == Mode::Train && cfg_.dropout > 0 && !rng) throw ConfigError("forward: training mode needs an RNG");
    Mat<T> memory = encode(src, mode, rng, tape);
    return decode(memory, Segments::of(src), tgt_in, mode, rng, tape);
  }

  // Accumulates d(loss)/d(params) into `grads` given d(loss)/d(logits).
  void backward(const Tape<T>& tape, const Mat<T>& dlogits, ParamStore<T>& grads) const {
    Mat<T> dz = linear_backward(tape.dec_out, dlogits, out_, grads);
    Mat<T> dy = layer_norm_backward(dz, dec_norm_, tape.dec_norm, grads);
    Mat<T> dmem = Mat<T>::Zero(tape.src.total, cfg_.d_model);
    for (std::size_t l = dec_.size(); l-- > 0;) {
      const auto& ix = dec_[l];
      const auto& c = tape.dec[l];
      Mat<T> df = dropout_backward(dy, c.d3);
      dy += layer_norm_backward(ffn_backward(ix.ff, df, c.ff, grads), ix.n3, c.n3, grads);
      Mat<T> da = dropout_backward(dy, c.d2);
      Mat<T> dq, dkv;
      attention_backward(ix.cross, da, c.cross, grads, dq, dkv);
      dmem += dkv;
      dy += layer_norm_backward(dq, ix.n2, c.n2, grads);
      da = dropout_backward(dy, c.d1);
      attention_backward(ix.self, da, c.self, grads, dq, dkv);
      dq += dkv;
      dy += layer_norm_backward(dq, ix.n1, c.n1, grads);
    }
    embed_backward(dropout_backward(dy, tape.dec_drop), tape.tgt_tokens, grads);

    Mat<T> dx = layer_norm_backward(dmem, enc_norm_, tape.enc_norm, grads);
    for (std::size_t l = enc_.size(); l-- > 0;) {
      const auto& ix = enc_[l];
      const auto& c = tape.enc[l];
      Mat<T> df = dropout_backward(dx, c.d2);
      dx += layer_norm_backward(ffn_backward(ix.ff, df, c.ff, grads), ix.n2, c.n2, grads);
      Mat<T> da = dropout_backward(dx, c.d1);
      Mat<T> dq, dkv;
      attention_backward(ix.self, da, c.self, grads, dq, dkv);
      dq += dkv;
      dx += layer_norm_backward(dq, ix.n1, c.n1, grads);
    }
    embed_backward(dropout_backward(dx, tape.enc_drop), tape.src_tokens, grads);
  }

 private:
  static std::vector<int> flatten(const std::vector<std::vector<int>>& seqs) {
    std::vector<int> out;
    for (const auto& s : seqs) out.insert(out.end(), s.begin(), s.end());
    return out;
  }

  void build_positions() {
    pos_ = Mat<T>::Zero(cfg_.max_len, cfg_.d_model);
    for (Index p = 0; p < cfg_.max_len; ++p) {
      for (Index i = 0; i < cfg_.d_model; i += 2) {
        const double rate = std::pow(10000.0, -static_cast<double>(i) / cfg_.d_model);
        pos_(p, i) = static_cast<T>(std::sin(static_cast<double>(p) * rate));
        if (i + 1 < cfg_.d_model) pos_(p, i + 1) = static_cast<T>(std::cos(static_cast<double>(p) * rate));
      }
    }
  }

  T embed_scale() const { return static_cast<T>(std::sqrt(static_cast<double>(cfg_.d_model))); }

  Mat<T> embed(const std::vector<int>& toks, const Segments& segs) const {
    Mat<T> x(static_cast<Index>(toks.size()), cfg_.d_model);
    const Mat<T>& e = p_[embed_];
    const T scale = embed_scale();
    for (std::size_t s = 0; s < segs.size(); ++s)
      for (Index i = 0; i < segs.length[s]; ++i) {
        const Index r = segs.offset[s] + i;
        x.row(r) = e.row(toks[static_cast<std::size_t>(r)]) * scale + pos_.row(i);
      }
    return x;
  }

  void embed_backward(const Mat<T>& dx, const std::vector<int>& toks, ParamStore<T>& g) const {
    Mat<T>& de = g[embed_];
    const T scale = embed_scale();
    for (Index r = 0; r < dx.rows(); ++r) de.row(toks[static_cast<std::size_t>(r)]) += dx.row(r) * scale;
  }

  Mat<T> dropout(const Mat<T>& x, Mode mode, Rng* rng, DropCache<T>* cache) const {
    if (mode == Mode::Eval || cfg_.dropout <= 0.0) {
      if (cache) cache->mask.resize(0, 0);
      return x;
    }
    const T keep = static_cast<T>(1.0 - cfg_.dropout);
    Mat<T> mask(x.rows(), x.cols());
    for (Index k = 0; k < mask.size(); ++k) mask.data()[k] = uniform01(*rng) < cfg_.dropout ? T(0) : T(1) / keep;
    Mat<T> y = x.cwiseProduct(mask);
    if (cache) cache->mask = std::move(mask);
    return y;
  }

  static Mat<T> dropout_backward(const Mat<T>& dy, const DropCache<T>& c) {
    if (c.mask.size() == 0) return dy;
    return dy.cwiseProduct(c.mask);
  }

  Mat<T> linear(const Mat<T>& x, const LinearIx& ix) const {
    Mat<T> y(x.rows(), p_[ix.w].cols());
    y.noalias() = x * p_[ix.w];
    y.rowwise() += p_[ix.b].row(0);
    return y;
  }

  Mat<T> linear_backward(const Mat<T>& x, const Mat<T>& dy, const LinearIx& ix, ParamStore<T>& g) const {
    g[ix.w].noalias() += x.transpose() * dy;
    g[ix.b] += dy.colwise().sum();
    Mat<T> dx(dy.rows(), p_[ix.w].rows());
    dx.noalias() = dy * p_[ix.w].transpose();
    return dx;
  }

  Mat<T> layer_norm(const Mat<T>& x, const NormIx& ix, NormCache<T>* cache) const {
    constexpr double kEps = 1e-5;
    const Index n = x.rows(), d = x.cols();
    Mat<T> xhat(n, d);
    ColVec<T> inv(n);
    for (Index r = 0; r < n; ++r) {
      const T mean = x.row(r).mean();
      const auto centered = x.row(r).array() - mean;
      const T var = centered.square().mean();
      inv(r) = T(1) / std::sqrt(var + static_cast<T>(kEps));
      xhat.row(r) = centered * inv(r);
    }
    Mat<T> y = xhat;
    y.array().rowwise() *= p_[ix.g].row(0).array();
    y.rowwise() += p_[ix.b].row(0);
    if (cache) {
      cache->xhat = std::move(xhat);
      cache->inv_std = std::move(inv);
    }
    return y;
  }

  Mat<T> layer_norm_backward(const Mat<T>& dy, const NormIx& ix, const NormCache<T>& c, ParamStore<T>& g) const {
    const Index n = dy.rows(), d = dy.cols();
    g[ix.g] += dy.cwiseProduct(c.xhat).colwise().sum();
    g[ix.b] += dy.colwise().sum();
    Mat<T> dxhat = dy;
    dxhat.array().rowwise() *= p_[ix.g].row(0).array();
    Mat<T> dx(n, d);
    const T inv_d = T(1) / static_cast<T>(d);
    for (Index r = 0; r < n; ++r) {
      const T s1 = dxhat.row(r).sum();
      const T s2 = dxhat.row(r).dot(c.xhat.row(r));
      dx.row(r) = (dxhat.row(r).array() * static_cast<T>(d) - s1 - c.xhat.row(r).array() * s2) * (c.inv_std(r) * inv_d);
    }
    return dx;
  }

  Mat<T> ffn(const FfnIx& ix, const Mat<T>& x, FfnCache<T>* cache) const {
    Mat<T> h = linear(x, ix.in).cwiseMax(T(0));
    Mat<T> y = linear(h, ix.out);
    if (cache) {
      cache->x = x;
      cache->h = std::move(h);
    }
    return y;
  }

  Mat<T> ffn_backward(const FfnIx& ix, const Mat<T>& dy, const FfnCache<T>& c, ParamStore<T>& g) const {
    Mat<T> dh = linear_backward(c.h, dy, ix.out, g);
    dh = (c.h.array() > T(0)).select(dh, T(0));
    return linear_backward(c.x, dh, ix.in, g);
  }

  Mat<T> attention(const AttnIx& ix, const Mat<T>& q_in, const Mat<T>& kv_in, const Segments& qs,
                   const Segments& ks, bool causal, AttnCache<T>* cache) const {
    const Index heads = cfg_.heads, dh = cfg_.d_model / cfg_.heads;
    const T scale = T(1) / std::sqrt(static_cast<T>(dh));
    Mat<T> Q = linear(q_in, ix.q), K = linear(kv_in, ix.k), V = linear(kv_in, ix.v);
    Mat<T> ctx = Mat<T>::Zero(q_in.rows(), cfg_.d_model);
    std::vector<Mat<T>> probs;
    if (cache) probs.reserve(qs.size() * static_cast<std::size_t>(heads));
    for (std::size_t s = 0; s < qs.size(); ++s) {
      const Index lq = qs.length[s], lk = ks.length[s];
      for (Index h = 0; h < heads; ++h) {
        Mat<T> P(lq, lk);
        P.noalias() = Q.block(qs.offset[s], h * dh, lq, dh) * K.block(ks.offset[s], h * dh, lk, dh).transpose();
        P *= scale;
        for (Index i = 0; i < lq; ++i) {
          const Index visible = causal ? std::min(i + 1, lk) : lk;
          auto row = P.row(i);
          const T mx = row.head(visible).maxCoeff();
          T sum = 0;
          for (Index j = 0; j < visible; ++j) {
            row(j) = std::exp(row(j) - mx);
            sum += row(j);
          }
          row.head(visible) /= sum;
          for (Index j = visible; j < lk; ++j) row(j) = 0;
        }
        ctx.block(qs.offset[s], h * dh, lq, dh).noalias() = P * V.block(ks.offset[s], h * dh, lk, dh);
        if (cache) probs.push_back(std::move(P));
      }
    }
    Mat<T> out = linear(ctx, ix.o);
    if (cache) {
      cache->q_in = q_in;
      cache->kv_in = kv_in;
      cache->Q = std::move(Q);
      cache->K = std::move(K);
      cache->V = std::move(V);
      cache->ctx = std::move(ctx);
      cache->probs = std::move(probs);
      cache->qs = qs;
      cache->ks = ks;
      cache->causal = causal;
    }
    return out;
  }

  void attention_backward(const AttnIx& ix, const Mat<T>& dout, const AttnCache<T>& c, ParamStore<T>& g,
                          Mat<T>& dq_in, Mat<T>& dkv_in) const {
    const Index heads = cfg_.heads, dh = cfg_.d_model / cfg_.heads;
    const T scale = T(1) / std::sqrt(static_cast<T>(dh));
    Mat<T> dctx = linear_backward(c.ctx, dout, ix.o, g);
    Mat<T> dQ = Mat<T>::Zero(c.Q.rows(), c.Q.cols());
    Mat<T> dK = Mat<T>::Zero(c.K.rows(), c.K.cols());
    Mat<T> dV = Mat<T>::Zero(c.V.rows(), c.V.cols());
    for (std::size_t s = 0; s < c.qs.size(); ++s) {
      const Index lq = c.qs.length[s], lk = c.ks.length[s];
      const Index qo = c.qs.offset[s], ko = c.ks.offset[s];
      for (Index h = 0; h < heads; ++h) {
        const Mat<T>& P = c.probs[s * static_cast<std::size_t>(heads) + static_cast<std::size_t>(h)];
        const auto dO = dctx.block(qo, h * dh, lq, dh);
        Mat<T> dP(lq, lk);
        dP.noalias() = dO * c.V.block(ko, h * dh, lk, dh).transpose();
        dV.block(ko, h * dh, lk, dh).noalias() += P.transpose() * dO;
        Mat<T> dS = P.cwiseProduct(dP);
        const ColVec<T> rows = dS.rowwise().sum();
        dS.array() -= P.array().colwise() * rows.array();
        dS *= scale;
        dQ.block(qo, h * dh, lq, dh).noalias() += dS * c.K.block(ko, h * dh, lk, dh);
        dK.block(ko, h * dh, lk, dh).noalias() += dS.transpose() * c.Q.block(qo, h * dh, lq, dh);
      }
    }
    dq_in = linear_backward(c.q_in, dQ, ix.q, g);
    dkv_in = linear_backward(c.kv_in, dK, ix.k, g);
    dkv_in += linear_backward(c.kv_in, dV, ix.v, g);
  }

  ModelConfig cfg_;
  int vocab_size_ = 0;
  ParamStore<T> p_;
  std::size_t embed_ = 0;
  std::vector<EncLayerIx> enc_;
  NormIx enc_norm_;
  std::vector<DecLayerIx> dec_;
  NormIx dec_norm_;
  LinearIx out_;
  Mat<T> pos_;
};

}  // namespace morphome::nn
