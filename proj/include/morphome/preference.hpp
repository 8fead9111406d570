// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "morphome/eval.hpp"
#include "morphome/stats.hpp"

namespace morphome {

enum class RatioUnit { PerItem, PerResponder };

struct PreferenceRatio {
  RatioUnit unit = RatioUnit::PerItem;
  std::string key;  // item_id or responder_id
  std::size_t n_natural = 0;
  std::size_t n_lshaped = 0;
  double log_ratio = 0;
};

// Natural vs L-shaped counts per item (or responder), Other excluded. Keys
// come back sorted.
inline std::vector<PreferenceRatio> preference_log_ratio(const std::vector<ResponseRecord>& records, RatioUnit unit,
                                                         const LogRatioOptions& opt = {}) {
  std::map<std::string, PreferenceRatio> by;
  for (const auto& r : records) {
    const std::string& key = unit == RatioUnit::PerItem ? r.item_id : r.responder_id;
    auto& pr = by[key];
    pr.unit = unit;
    pr.key = key;
    if (r.classification == ResponseClass::Natural) ++pr.n_natural;
    else if (r.classification == ResponseClass::LShaped) ++pr.n_lshaped;
  }
  std::vector<PreferenceRatio> out;
  for (auto& [_, pr] : by) {
    pr.log_ratio = log_ratio(static_cast<double>(pr.n_natural), static_cast<double>(pr.n_lshaped), opt);
    out.push_back(pr);
  }
  return out;
}

}  // namespace morphome
