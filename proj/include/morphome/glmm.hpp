// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Logistic regression with crossed random intercepts for item and responder:
//
//   logit P(answer = L) = intercept + beta * x + u[item] + v[responder]
//   u ~ N(0, sigma_item^2), v ~ N(0, sigma_responder^2)
//
// fitted by Laplace-approximate marginal likelihood. The inner loop is a
// penalized Newton (IRLS) solve for the joint mode of fixed and random
// effects; the outer loop searches log-sigma coordinate-wise by golden
// section, also trying the sigma = 0 boundary.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "morphome/errors.hpp"

namespace morphome {

struct RegressionRow {
  int answer = 0;  // 1 = L-shaped, 0 = natural
  double x = 0;
  std::string item;
  std::string responder;
};

struct GlmmOptions {
  std::optional<double> fixed_sigma_item;
  std::optional<double> fixed_sigma_responder;
  double sigma_min = 1e-4;
  double sigma_max = 10.0;
  int max_outer = 200;
  double tol = 1e-8;        // outer convergence on the Laplace log-likelihood
  int max_inner = 100;
  double search_tol = 1e-5; // golden-section bracket width in log-sigma
};

struct RegressionFit {
  double intercept = 0;
  double beta = 0;
  double se_beta = 0;
  double wald_z = 0;
  double p_value = 1;
  double sigma_item = 0;
  double sigma_responder = 0;
  double log_likelihood = 0;  // Laplace approximation at the optimum
  bool converged = false;
  int outer_iterations = 0;
  std::size_t n_rows = 0;
  std::size_t n_items = 0;
  std::size_t n_responders = 0;
  std::string method = "Laplace-approximate penalized likelihood";
};

namespace detail {

inline double log1pexp(double eta) { return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta)); }

class GlmmProblem {
 public:
  explicit GlmmProblem(const std::vector<RegressionRow>& rows) : rows_(rows) {
    std::map<std::string, int> items, resp;
    for (const auto& r : rows) {
      items.emplace(r.item, 0);
      resp.emplace(r.responder, 0);
    }
    int k = 0;
    for (auto& [_, v] : items) v = k++;
    k = 0;
    for (auto& [_, v] : resp) v = k++;
    n_items_ = static_cast<int>(items.size());
    n_resp_ = static_cast<int>(resp.size());
    for (const auto& r : rows) {
      item_.push_back(items.at(r.item));
      resp_.push_back(resp.at(r.responder));
    }
    theta_ = Eigen::VectorXd::Zero(dim());
  }

  int n_items() const { return n_items_; }
  int n_responders() const { return n_resp_; }
  int dim() const { return 2 + n_items_ + n_resp_; }
  const Eigen::VectorXd& theta() const { return theta_; }
  const Eigen::MatrixXd& hessian() const { return hessian_; }

  double penalized_loglik(const Eigen::VectorXd& th, double s_item, double s_resp) const {
    double ll = 0;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const double eta = linpred(th, r, s_item, s_resp);
      ll += rows_[r].answer * eta - log1pexp(eta);
    }
    if (s_item > 0) ll -= 0.5 * th.segment(2, n_items_).squaredNorm() / (s_item * s_item);
    if (s_resp > 0) ll -= 0.5 * th.segment(2 + n_items_, n_resp_).squaredNorm() / (s_resp * s_resp);
    return ll;
  }

  // Newton iterations with step halving from the current mode estimate.
  // Returns the penalized log-likelihood at the mode; leaves the negative
  // Hessian there in hessian(). `trace` receives the objective after every
  // iteration.
  double solve_mode(double s_item, double s_resp, int max_iter, std::vector<double>* trace = nullptr) {
    const int d = dim();
    Eigen::VectorXd th = theta_;
    if (s_item <= 0) th.segment(2, n_items_).setZero();
    if (s_resp <= 0) th.segment(2 + n_items_, n_resp_).setZero();
    double pll = penalized_loglik(th, s_item, s_resp);
    Eigen::VectorXd g(d);
    for (int it = 0; it < max_iter; ++it) {
      build_system(th, s_item, s_resp, g);
      const Eigen::VectorXd step = hessian_.ldlt().solve(g);
      if (!step.allFinite()) throw NonConvergence("glmm: singular penalized Hessian");
      double t = 1.0, next = 0;
      Eigen::VectorXd cand;
      int halvings = 0;
      for (;; ++halvings) {
        cand = th + t * step;
        next = penalized_loglik(cand, s_item, s_resp);
        if (std::isfinite(next) && next >= pll - 1e-12 * (1.0 + std::abs(pll))) break;
        if (halvings > 40) {
          cand = th;
          next = pll;
          break;
        }
        t *= 0.5;
      }
      const double gain = next - pll;
      const double move = (cand - th).cwiseAbs().maxCoeff();
      th = cand;
      pll = next;
      if (trace) trace->push_back(pll);
      if (std::abs(gain) < 1e-12 * (1.0 + std::abs(pll)) && move < 1e-9) break;
    }
    build_system(th, s_item, s_resp, g);
    theta_ = th;
    return pll;
  }

  // Laplace log marginal likelihood at (s_item, s_resp), sigma = 0 meaning
  // the group is absent.
  double laplace(double s_item, double s_resp, int max_iter) {
    const double pll = solve_mode(s_item, s_resp, max_iter);
    // log det(I + S^(1/2) Z'WZ S^(1/2)) over the active random effects
    std::vector<int> idx;
    std::vector<double> sd;
    for (int i = 0; i < n_items_ && s_item > 0; ++i) {
      idx.push_back(2 + i);
      sd.push_back(s_item);
    }
    for (int j = 0; j < n_resp_ && s_resp > 0; ++j) {
      idx.push_back(2 + n_items_ + j);
      sd.push_back(s_resp);
    }
    if (idx.empty()) return pll;
    const int q = static_cast<int>(idx.size());
    Eigen::MatrixXd s(q, q);
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) {
        double zwz = hessian_(idx[a], idx[b]);
        if (a == b) zwz -= 1.0 / (sd[a] * sd[a]);
        s(a, b) = sd[a] * zwz * sd[b] + (a == b ? 1.0 : 0.0);
      }
    Eigen::LLT<Eigen::MatrixXd> llt(s);
    if (llt.info() != Eigen::Success) throw NonConvergence("glmm: Laplace determinant not positive definite");
    double logdet = 0;
    for (int a = 0; a < q; ++a) logdet += 2.0 * std::log(llt.matrixL()(a, a));
    return pll - 0.5 * logdet;
  }

 private:
  double linpred(const Eigen::VectorXd& th, std::size_t r, double s_item, double s_resp) const {
    double eta = th(0) + th(1) * rows_[r].x;
    if (s_item > 0) eta += th(2 + item_[r]);
    if (s_resp > 0) eta += th(2 + n_items_ + resp_[r]);
    return eta;
  }

  void build_system(const Eigen::VectorXd& th, double s_item, double s_resp, Eigen::VectorXd& g) {
    const int d = dim();
    hessian_ = Eigen::MatrixXd::Zero(d, d);
    g = Eigen::VectorXd::Zero(d);
    int cols[4];
    double vals[4];
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const double eta = linpred(th, r, s_item, s_resp);
      const double mu = 1.0 / (1.0 + std::exp(-eta));
      const double w = mu * (1.0 - mu);
      const double resid = rows_[r].answer - mu;
      int n = 0;
      cols[n] = 0;
      vals[n++] = 1.0;
      cols[n] = 1;
      vals[n++] = rows_[r].x;
      if (s_item > 0) {
        cols[n] = 2 + item_[r];
        vals[n++] = 1.0;
      }
      if (s_resp > 0) {
        cols[n] = 2 + n_items_ + resp_[r];
        vals[n++] = 1.0;
      }
      for (int a = 0; a < n; ++a) {
        g(cols[a]) += vals[a] * resid;
        for (int b = 0; b < n; ++b) hessian_(cols[a], cols[b]) += w * vals[a] * vals[b];
      }
    }
    for (int i = 0; i < n_items_; ++i) {
      const int c = 2 + i;
      if (s_item > 0) {
        hessian_(c, c) += 1.0 / (s_item * s_item);
        g(c) -= th(c) / (s_item * s_item);
      } else {
        hessian_(c, c) = 1.0;
      }
    }
    for (int j = 0; j < n_resp_; ++j) {
      const int c = 2 + n_items_ + j;
      if (s_resp > 0) {
        hessian_(c, c) += 1.0 / (s_resp * s_resp);
        g(c) -= th(c) / (s_resp * s_resp);
      } else {
        hessian_(c, c) = 1.0;
      }
    }
  }

  const std::vector<RegressionRow>& rows_;
  std::vector<int> item_, resp_;
  int n_items_ = 0, n_resp_ = 0;
  Eigen::VectorXd theta_;
  Eigen::MatrixXd hessian_;
};

// Maximizes f on [lo, hi] assuming unimodality.
template <class F>
std::pair<double, double> golden_section_max(F&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace detail

// Throws Separation when the outcome is constant or x splits the outcomes
// perfectly (the slope MLE is then unbounded).
inline void check_separation(const std::vector<RegressionRow>& rows) {
  double min0 = INFINITY, max0 = -INFINITY, min1 = INFINITY, max1 = -INFINITY;
  std::size_t n1 = 0;
  for (const auto& r : rows) {
    if (r.answer != 0 && r.answer != 1) throw DataError("glmm: answers must be 0/1");
    if (r.answer) {
      ++n1;
      min1 = std::min(min1, r.x);
      max1 = std::max(max1, r.x);
    } else {
      min0 = std::min(min0, r.x);
      max0 = std::max(max0, r.x);
    }
  }
  if (n1 == 0 || n1 == rows.size()) throw Separation("glmm: all answers identical; likelihood is unbounded");
  if (std::min(min0, min1) == std::max(max0, max1)) throw DataError("glmm: predictor is constant");
  if (max0 <= min1 || max1 <= min0) throw Separation("glmm: predictor separates the answers completely");
}

inline RegressionFit fit_glmm(const std::vector<RegressionRow>& rows, const GlmmOptions& opt = {}) {
  if (rows.empty()) throw EmptyInput("glmm: no rows");
  for (const auto& r : rows)
    if (!std::isfinite(r.x)) throw DataError("glmm: non-finite predictor for item " + r.item);
  check_separation(rows);
  detail::GlmmProblem prob(rows);
  if (prob.n_items() < 2 || prob.n_responders() < 2)
    throw DataError("glmm: need at least two items and two responders");

  const double lo = std::log(opt.sigma_min), hi = std::log(opt.sigma_max);
  double s_item = opt.fixed_sigma_item.value_or(1.0);
  double s_resp = opt.fixed_sigma_responder.value_or(1.0);
  double ll = prob.laplace(s_item, s_resp, opt.max_inner);
  RegressionFit fit;

  auto optimize = [&](bool item_coord) {
    auto eval = [&](double s) { return item_coord ? prob.laplace(s, s_resp, opt.max_inner)
                                                   : prob.laplace(s_item, s, opt.max_inner); };
    auto [t, best] = detail::golden_section_max([&](double t) { return eval(std::exp(t)); }, lo, hi, opt.search_tol);
    double s = std::exp(t);
    const double at_zero = eval(0.0);
    if (at_zero >= best) {
      s = 0.0;
      best = at_zero;
    }
    (item_coord ? s_item : s_resp) = s;
    return best;
  };

  const bool free_item = !opt.fixed_sigma_item, free_resp = !opt.fixed_sigma_responder;
  if (free_item || free_resp) {
    for (fit.outer_iterations = 1; fit.outer_iterations <= opt.max_outer; ++fit.outer_iterations) {
      double next = ll;
      if (free_item) next = optimize(true);
      if (free_resp) next = optimize(false);
      const bool done = std::abs(next - ll) < opt.tol * (1.0 + std::abs(ll));
      ll = next;
      if (done || !(free_item && free_resp)) {
        fit.converged = true;
        break;
      }
    }
    if (!fit.converged) fit.outer_iterations = opt.max_outer;
  } else {
    fit.converged = true;
  }

  ll = prob.laplace(s_item, s_resp, opt.max_inner);
  const Eigen::VectorXd& th = prob.theta();
  const Eigen::MatrixXd cov = prob.hessian().ldlt().solve(Eigen::MatrixXd::Identity(prob.dim(), prob.dim()));
  fit.intercept = th(0);
  fit.beta = th(1);
  fit.se_beta = std::sqrt(std::max(0.0, cov(1, 1)));
  fit.wald_z = fit.se_beta > 0 ? fit.beta / fit.se_beta : 0.0;
  fit.p_value = std::erfc(std::abs(fit.wald_z) / std::sqrt(2.0));
  fit.sigma_item = s_item;
  fit.sigma_responder = s_resp;
  fit.log_likelihood = ll;
  fit.n_rows = rows.size();
  fit.n_items = static_cast<std::size_t>(prob.n_items());
  fit.n_responders = static_cast<std::size_t>(prob.n_responders());
  if (!std::isfinite(fit.beta) || !std::isfinite(fit.se_beta)) throw NonConvergence("glmm: non-finite estimate");
  return fit;
}

}  // namespace morphome
