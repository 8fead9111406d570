// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Descriptive summaries, Laplace-smoothed log ratios, Spearman rank
// correlation and the two-sample Kolmogorov-Smirnov test.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "morphome/errors.hpp"

namespace morphome {

struct Summary {
  double mean = 0;
  double sd = 0;  // sample SD (n-1); 0 for a single value
  double ci_low = 0;
  double ci_high = 0;
  std::size_t n = 0;
};

inline Summary summarize(const std::vector<double>& xs) {
  if (xs.empty()) throw EmptyInput("summarize: empty input");
  Summary s;
  s.n = xs.size();
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  const double half = 1.96 * s.sd / std::sqrt(static_cast<double>(s.n));
  s.ci_low = s.mean - half;
  s.ci_high = s.mean + half;
  return s;
}

struct LogRatioOptions {
  double alpha = 1.0;  // add-alpha smoothing on both counts
  double base = 10.0;
  double clamp = 3.0;
};

// log_base((n_natural + alpha) / (n_lshaped + alpha)), clamped to
// [-clamp, clamp]. Positive values mean a natural preference.
inline double log_ratio(double n_natural, double n_lshaped, const LogRatioOptions& o = {}) {
  if (n_natural < 0 || n_lshaped < 0) throw DataError("log_ratio: negative count");
  if (!(o.alpha > 0)) throw ConfigError("log_ratio: alpha must be positive");
  const double r = std::log((n_natural + o.alpha) / (n_lshaped + o.alpha)) / std::log(o.base);
  return std::clamp(r, -o.clamp, o.clamp);
}

// Average ranks (1-based), ties share the mean of their positions.
inline std::vector<double> average_ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

struct CorrelationResult {
  double rho = 0;
  double p_value = 1;
  std::size_t n = 0;
  std::string method;  // "exact-permutation" or "t-approximation"
};

inline constexpr std::size_t kSpearmanExactMaxN = 8;

inline CorrelationResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw LengthMismatch("spearman: inputs differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw LengthMismatch("spearman: need at least 3 pairs");
  std::vector<double> rx = average_ranks(x), ry = average_ranks(y);
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  for (auto& v : rx) v -= mean;
  for (auto& v : ry) v -= mean;
  const double sxx = std::inner_product(rx.begin(), rx.end(), rx.begin(), 0.0);
  const double syy = std::inner_product(ry.begin(), ry.end(), ry.begin(), 0.0);
  if (sxx == 0 || syy == 0) throw ConstantInput("spearman: constant input, rho undefined");
  const double denom = std::sqrt(sxx * syy);
  auto corr = [&](const std::vector<double>& yy) {
    return std::inner_product(rx.begin(), rx.end(), yy.begin(), 0.0) / denom;
  };

  CorrelationResult res;
  res.n = n;
  res.rho = std::clamp(corr(ry), -1.0, 1.0);
  if (n <= kSpearmanExactMaxN) {
    // two-sided: share of the n! pairings at least as extreme as observed
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> yy(n);
    const double obs = std::abs(res.rho) - 1e-12;
    std::size_t extreme = 0, total = 0;
    do {
      for (std::size_t i = 0; i < n; ++i) yy[i] = ry[perm[i]];
      if (std::abs(corr(yy)) >= obs) ++extreme;
      ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    res.p_value = static_cast<double>(extreme) / static_cast<double>(total);
    res.method = "exact-permutation";
  } else {
    const double r2 = res.rho * res.rho;
    if (r2 >= 1.0) {
      res.p_value = 0.0;
    } else {
      const double df = static_cast<double>(n) - 2.0;
      const double t = std::abs(res.rho) * std::sqrt(df / (1.0 - r2));
      boost::math::students_t dist(df);
      res.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, t)));
    }
    res.method = "t-approximation";
  }
  return res;
}

struct KsResult {
  double d = 0;
  double p_value = 1;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

// P(K > lambda) for the Kolmogorov distribution. The alternating series
// converges fast for large lambda; the theta-function form for small lambda.
inline double kolmogorov_survival(double lambda) {
  constexpr int kTerms = 100;
  constexpr double kTol = 1e-10;
  if (lambda <= 0) return 1.0;
  if (lambda < 1.18) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double cdf = 0;
    for (int k = 1; k <= kTerms; ++k) {
      const double m = 2.0 * k - 1.0;
      const double term = std::exp(-m * m * pi2 / (8.0 * lambda * lambda));
      cdf += term;
      if (term < kTol * cdf) break;
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double q = 0;
  for (int k = 1; k <= kTerms; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    q += (k % 2 ? 2.0 : -2.0) * term;
    if (term < kTol) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw EmptyInput("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n1 = static_cast<double>(a.size()), n2 = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  // walk the merged order; ECDFs are compared after consuming each tie block
  while (i < a.size() || j < b.size()) {
    double v;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j])) v = a[i];
    else v = b[j];
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  KsResult r{d, 1.0, a.size(), b.size()};
  const double ne = n1 * n2 / (n1 + n2);
  r.p_value = kolmogorov_survival(std::sqrt(ne) * d);
  return r;
}

// "***" p <= .001, "**" p <= .01, "*" p <= .05.
inline std::string significance_stars(double p) {
  if (p <= 0.001) return "***";
  if (p <= 0.01) return "**";
  if (p <= 0.05) return "*";
  return "";
}

}  // namespace morphome
