// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "morphome/combination.hpp"
#include "morphome/errors.hpp"
#include "morphome/paradigm.hpp"
#include "morphome/stats.hpp"

namespace morphome {

enum class ResponseClass { Natural, LShaped, Other };

inline const char* to_string(ResponseClass c) {
  switch (c) {
    case ResponseClass::Natural: return "natural";
    case ResponseClass::LShaped: return "lshaped";
    default: return "other";
  }
}

inline ResponseClass parse_response_class(const std::string& s) {
  if (s == "natural") return ResponseClass::Natural;
  if (s == "lshaped") return ResponseClass::LShaped;
  if (s == "other") return ResponseClass::Other;
  throw DataError("unknown response class '" + s + "'");
}

struct ResponseRecord {
  std::string item_id;
  std::string responder_id;
  std::string condition;
  CellTag target;
  Form predicted;
  ResponseClass classification = ResponseClass::Other;
  bool stem_correct = false;
  bool suffix_correct = false;
  bool seq_correct = false;
};

// The two cells probed in the human study: 2SG.SBJV given 1SG.IND and
// 2SG.IND (group 1), and 1SG.IND given 2SG.IND and 2SG.SBJV (group 2).
inline bool is_probed_cell(const CellTag& c) { return c == k2SgSbjv || c == k1SgInd; }

// Probe inputs for one item, in canonical cell order.
inline std::vector<Combination> probe_combinations(const TestItem& item, const SuffixTable& table) {
  const Paradigm p = item.paradigm(table);
  return {
      Combination{{p.form(k1SgInd), k1SgInd}, {p.form(k2SgInd), k2SgInd}, k2SgSbjv, p.form(k2SgSbjv), item.item_id},
      Combination{{p.form(k2SgInd), k2SgInd}, {p.form(k2SgSbjv), k2SgSbjv}, k1SgInd, p.form(k1SgInd), item.item_id},
  };
}

// Gold is the L-shaped paradigm of the item. The stem is read off by
// stripping a suffix licensed for `target`; when no suffix matches, an
// attested stem that is a proper prefix of the response is still credited
// for classification, and the suffix counts as wrong.
inline ResponseRecord classify_response(const TestItem& item, const CellTag& target, const Form& predicted,
                                        const SuffixTable& table, std::string responder_id = {},
                                        std::string condition = {}) {
  ResponseRecord r{item.item_id, std::move(responder_id), std::move(condition), target, predicted};
  const Paradigm gold = item.paradigm(table);
  std::optional<Form> stem;
  if (auto split = strip_suffix(predicted, target, table)) {
    stem = split->stem;
    r.suffix_correct = true;
  } else {
    for (const Form* s : {&item.l_stem, &item.nl_stem})
      if (s->size() < predicted.size() && std::equal(s->begin(), s->end(), predicted.begin())) stem = *s;
  }
  if (stem && *stem == item.l_stem) r.classification = ResponseClass::LShaped;
  else if (stem && *stem == item.nl_stem) r.classification = ResponseClass::Natural;
  else r.classification = ResponseClass::Other;
  r.stem_correct = stem && *stem == gold.stem_for(target);
  r.seq_correct = predicted == gold.form(target);
  return r;
}

struct AccuracySummary {
  double mean = 0;  // percent
  double sd = 0;
  double ci_low = 0;
  double ci_high = 0;
  std::size_t n_responders = 0;
  std::size_t n_records = 0;
  std::string method = "per-responder mean; 95% CI = mean +/- 1.96*SD/sqrt(n)";
};

namespace detail {

template <class Pred>
AccuracySummary per_responder_accuracy(const std::vector<ResponseRecord>& records, Pred correct, const char* what) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> by;  // hits, total
  for (const auto& r : records) {
    auto& [hit, tot] = by[r.responder_id];
    hit += correct(r) ? 1 : 0;
    ++tot;
  }
  if (by.empty()) throw EmptyInput(std::string(what) + ": no records");
  std::vector<double> acc;
  for (const auto& [_, ht] : by) acc.push_back(100.0 * static_cast<double>(ht.first) / static_cast<double>(ht.second));
  const Summary s = summarize(acc);
  return AccuracySummary{s.mean, s.sd, s.ci_low, s.ci_high, by.size(), records.size()};
}

}  // namespace detail

inline std::vector<ResponseRecord> restrict_to_probed_cells(const std::vector<ResponseRecord>& records) {
  std::vector<ResponseRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [](const ResponseRecord& r) { return is_probed_cell(r.target); });
  return out;
}

inline std::vector<ResponseRecord> exclude_other(const std::vector<ResponseRecord>& records) {
  std::vector<ResponseRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [](const ResponseRecord& r) { return r.classification != ResponseClass::Other; });
  return out;
}

inline AccuracySummary stem_accuracy(const std::vector<ResponseRecord>& records, bool restrict_to_target_cells) {
  return detail::per_responder_accuracy(restrict_to_target_cells ? restrict_to_probed_cells(records) : records,
                                        [](const ResponseRecord& r) { return r.stem_correct; }, "stem_accuracy");
}

inline AccuracySummary suffix_accuracy(const std::vector<ResponseRecord>& records) {
  return detail::per_responder_accuracy(records, [](const ResponseRecord& r) { return r.suffix_correct; },
                                        "suffix_accuracy");
}

inline AccuracySummary sequence_accuracy(const std::vector<ResponseRecord>& records) {
  return detail::per_responder_accuracy(records, [](const ResponseRecord& r) { return r.seq_correct; },
                                        "sequence_accuracy");
}

}  // namespace morphome
