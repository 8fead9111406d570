// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Consolidated report: every computed table next to the published reference
// values, columns labeled "published" and "this run". A value that was not
// computed stays empty; fixture values never stand in for it.

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "morphome/pipeline/commands.hpp"

namespace morphome::pipeline {

inline std::vector<std::string> report_inputs() {
  return {"analysis/accuracy.csv",       "analysis/preference_by_item.csv", "analysis/preference_summary.csv",
          "analysis/correlation.csv",    "analysis/ks.csv",                 "gnm/wordlikeness.csv",
          "regress/regression.csv"};
}

namespace detail {

inline std::map<std::string, std::map<std::string, std::string>> index_rows(const CsvTable& t,
                                                                           const std::vector<std::string>& key_cols) {
  std::map<std::string, std::map<std::string, std::string>> out;
  std::vector<std::size_t> kc;
  for (const auto& k : key_cols) kc.push_back(t.column(k));
  for (const auto& r : t.rows) {
    std::string key;
    for (std::size_t i = 0; i < kc.size(); ++i) key += (i ? "|" : "") + r[kc[i]];
    auto& row = out[key];
    for (std::size_t c = 0; c < t.header.size(); ++c) row[t.header[c]] = r[c];
  }
  return out;
}

inline std::string get(const std::map<std::string, std::map<std::string, std::string>>& idx, const std::string& key,
                       const std::string& col) {
  auto it = idx.find(key);
  if (it == idx.end()) return "";
  auto c = it->second.find(col);
  return c == it->second.end() ? "" : c->second;
}

inline std::string md_table(const CsvTable& t) {
  std::string s = "|";
  for (const auto& h : t.header) s += " " + h + " |";
  s += "\n|";
  for (std::size_t i = 0; i < t.header.size(); ++i) s += "---|";
  s += "\n";
  for (const auto& r : t.rows) {
    s += "|";
    for (const auto& f : r) s += " " + f + " |";
    s += "\n";
  }
  return s;
}

inline std::string round_text(const std::string& v, int digits = 3) {
  if (v.empty() || v == "NA") return v;
  try {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << std::stod(v);
    return os.str();
  } catch (const std::exception&) {
    return v;
  }
}

}  // namespace detail

// Scatter of log10 wordlikeness (x) against per-item log ratio (y) with a
// least-squares line.
inline std::string scatter_svg(const std::string& title, const std::vector<std::string>& labels,
                               const std::vector<double>& x, const std::vector<double>& y) {
  const double W = 560, H = 420, L = 70, R = 20, T = 40, B = 60;
  auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
  auto [ymin_it, ymax_it] = std::minmax_element(y.begin(), y.end());
  double x0 = *xmin_it, x1 = *xmax_it, y0 = std::min(*ymin_it, 0.0), y1 = std::max(*ymax_it, 0.0);
  if (x1 - x0 < 1e-12) x1 = x0 + 1;
  if (y1 - y0 < 1e-12) y1 = y0 + 1;
  const double px = (x1 - x0) * 0.05, py = (y1 - y0) * 0.08;
  x0 -= px, x1 += px, y0 -= py, y1 += py;
  auto sx = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
  auto sy = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };
  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << sy(0) << "\" x2=\"" << W - R << "\" y2=\"" << sy(0)
     << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
    os << "<text x=\"" << sx(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << detail::round_text(std::to_string(xv), 2) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << detail::round_text(std::to_string(yv), 2) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 18 << "\" text-anchor=\"middle\">log10 L-shaped wordlikeness (GNM)</text>\n";
  os << "<text transform=\"translate(18," << (T + H - B) / 2 << ") rotate(-90)\" text-anchor=\"middle\">log ratio natural / L-shaped</text>\n";
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  if (sxx > 0) {
    const double b = sxy / sxx, a = my - b * mx;
    const double xa = x0 + px, xb = x1 - px;
    os << "<line x1=\"" << sx(xa) << "\" y1=\"" << sy(a + b * xa) << "\" x2=\"" << sx(xb) << "\" y2=\"" << sy(a + b * xb)
       << "\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n";
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    os << "<circle cx=\"" << sx(x[i]) << "\" cy=\"" << sy(y[i]) << "\" r=\"4\" fill=\"chocolate\" fill-opacity=\"0.7\"/>\n";
    os << "<text x=\"" << sx(x[i]) + 6 << "\" y=\"" << sy(y[i]) - 5 << "\" font-size=\"9\">" << labels[i] << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline void cmd_report(const Context& ctx) {
  const fs::path wd = ctx.workdir();
  std::vector<std::string> missing;
  for (const auto& f : report_inputs())
    if (!fs::exists(wd / f)) missing.push_back((wd / f).string());
  if (!missing.empty()) {
    std::string msg = "cannot build report; missing artifacts:";
    for (const auto& m : missing) msg += "\n  " + m;
    throw DataError(msg);
  }
  using detail::get;
  using detail::round_text;
  const fs::path out = wd / "report";
  const Fixtures& fx = ctx.fixtures;
  std::string md = "# morphome-lab report\n\n"
                   "Columns marked `published` are published reference values; columns marked `this run` are computed "
                   "from this workdir. Empty cells were not computed.\n\n";

  // accuracy
  const auto acc = detail::index_rows(read_csv((wd / "analysis/accuracy.csv").string()), {"measure", "group"});
  CsvTable acc_t{{"measure", "group", "published_mean", "published_sd", "this_run_mean", "this_run_sd", "this_run_ci_low",
                  "this_run_ci_high", "this_run_n_responders"},
                 {}};
  for (const char* m : {"stem", "suffix", "sequence"}) {
    std::vector<std::string> groups{kParticipants};
    for (const auto& c : ctx.cfg.conditions) groups.push_back(FrequencyCondition::parse(c).name);
    for (const auto& g : groups) {
      std::string pm, ps;
      if (auto a = fx.accuracy.find(m); a != fx.accuracy.end())
        if (auto b = a->second.find(g); b != a->second.end()) pm = fmt(b->second.mean), ps = fmt(b->second.sd);
      const std::string key = std::string(m) + "|" + g;
      const std::string tm = get(acc, key, "mean");
      if (pm.empty() && tm.empty()) continue;
      acc_t.rows.push_back({m, condition_label(g), pm, ps, round_text(tm, 2), round_text(get(acc, key, "sd"), 2),
                            round_text(get(acc, key, "ci_low"), 2), round_text(get(acc, key, "ci_high"), 2),
                            get(acc, key, "n_responders")});
    }
  }
  write_text(out / "accuracy.csv", to_csv(acc_t));
  md += "## Accuracy (%)\n\n" + detail::md_table(acc_t) + "\n";

  // preference by item
  const auto by_item = detail::index_rows(read_csv((wd / "analysis/preference_by_item.csv").string()), {"group", "item_id"});
  CsvTable pref{{"item_id"}, {}};
  std::vector<std::string> groups{kParticipants};
  for (const auto& c : ctx.cfg.conditions) groups.push_back(FrequencyCondition::parse(c).name);
  for (const auto& g : groups) {
    pref.header.push_back("published_" + g);
    pref.header.push_back("this_run_" + g);
  }
  for (const auto& it : fx.items) {
    std::vector<std::string> row{it.item_id};
    for (const auto& g : groups) {
      std::string p;
      if (auto f = fx.per_item_log_ratio.find(g); f != fx.per_item_log_ratio.end())
        if (auto v = f->second.find(it.item_id); v != f->second.end()) p = round_text(fmt(v->second));
      row.push_back(p);
      row.push_back(round_text(get(by_item, g + "|" + it.item_id, "log_ratio")));
    }
    pref.rows.push_back(std::move(row));
  }
  write_text(out / "preference_by_item.csv", to_csv(pref));
  md += "## Preference log ratio by item (natural / L-shaped)\n\n"
        "The `this_run_participants` column is recomputed from " + fx.human_counts_citation + ".\n\n" +
        detail::md_table(pref) + "\n";

  const auto summ = detail::index_rows(read_csv((wd / "analysis/preference_summary.csv").string()), {"group"});
  CsvTable ps{{"group", "published_mean_log_ratio", "this_run_mean_log_ratio", "this_run_sd", "this_run_n_responders"}, {}};
  for (const auto& g : groups) {
    std::string p;
    if (auto f = fx.mean_log_ratio_per_responder.find(g); f != fx.mean_log_ratio_per_responder.end())
      p = fmt(f->second.value);
    ps.rows.push_back({condition_label(g), p, round_text(get(summ, g, "mean_log_ratio")), round_text(get(summ, g, "sd")),
                       get(summ, g, "n_responders")});
  }
  write_text(out / "preference_summary.csv", to_csv(ps));
  md += "## Mean preference log ratio per responder\n\n" + detail::md_table(ps) + "\n";

  // correlation and KS
  auto test_table = [&](const std::string& file, const std::vector<CitedTest>& cited, const std::string& stat) {
    const auto idx = detail::index_rows(read_csv((wd / "analysis" / file).string()), {"a", "b"});
    CsvTable t{{"comparison", "published_" + stat, "published_p", "this_run_" + stat, "this_run_p", "this_run_stars"}, {}};
    std::set<std::string> seen;
    for (const auto& c : cited) {
      const std::string key = c.a + "|" + c.b;
      seen.insert(key);
      t.rows.push_back({comparison_label(c.a, c.b), fmt(c.statistic), c.p_text, round_text(get(idx, key, stat)),
                        round_text(get(idx, key, "p_value")), get(idx, key, "stars")});
    }
    for (const auto& [key, row] : idx)
      if (!seen.contains(key))
        t.rows.push_back({row.at("comparison"), "", "", round_text(row.at(stat)), round_text(row.at("p_value")),
                          row.at("stars")});
    write_text(out / file, to_csv(t));
    return t;
  };
  md += "## Spearman rank correlation of per-item log ratios\n\n" +
        detail::md_table(test_table("correlation.csv", fx.spearman, "rho")) + "\n";
  md += "## Two-sample Kolmogorov-Smirnov test on per-item log ratios\n\n" +
        detail::md_table(test_table("ks.csv", fx.ks, "d")) + "\n";

  // regression
  const auto reg = detail::index_rows(read_csv((wd / "regress/regression.csv").string()), {"dataset"});
  CsvTable rt{{"dataset", "published_beta", "published_p", "this_run_beta", "this_run_se", "this_run_p", "this_run_stars",
               "this_run_n_rows", "status", "method", "note"},
              {}};
  for (const auto& g : groups) {
    std::string pb, pp;
    for (const auto& r : fx.regression)
      if (r.dataset == g) pb = fmt(r.beta), pp = r.p_text;
    rt.rows.push_back({condition_label(g), pb, pp, round_text(get(reg, g, "beta")), round_text(get(reg, g, "se")),
                       round_text(get(reg, g, "p_value"), 4), get(reg, g, "stars"), get(reg, g, "n_rows"),
                       get(reg, g, "status"), get(reg, g, "method"), get(reg, g, "note")});
  }
  write_text(out / "regression.csv", to_csv(rt));
  md += "## Wordlikeness regression: answer ~ log10 wordlikeness + (1|item) + (1|responder)\n\n" +
        detail::md_table(rt) + "\n";

  // wordlikeness and scatter plots
  std::map<std::string, double> x;
  for (const auto& s : read_scores((wd / "gnm/wordlikeness.csv").string())) x[s.item_id] = s.log10_raw;
  if (ctx.cfg.analysis.svg) {
    for (const auto& g : groups) {
      std::vector<std::string> labels;
      std::vector<double> xs, ys;
      for (const auto& it : fx.items) {
        const std::string v = get(by_item, g + "|" + it.item_id, "log_ratio");
        if (v.empty() || !x.contains(it.item_id)) continue;
        labels.push_back(it.item_id);
        xs.push_back(x.at(it.item_id));
        ys.push_back(std::stod(v));
      }
      if (xs.size() >= 2) write_text(out / ("scatter_" + g + ".svg"), scatter_svg(condition_label(g) + " (this run)", labels, xs, ys));
    }
    md += "Scatter plots of wordlikeness against preference: `scatter_<group>.svg`.\n";
  }
  write_text(out / "report.md", md);
  ctx.say("report: wrote ", (out / "report.md").string());
}

}  // namespace morphome::pipeline
