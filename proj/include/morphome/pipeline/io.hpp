// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0
//
// CSV readers and writers for the pipeline's intermediate files. Fields never
// contain commas or quotes (forms are space-separated glyphs), so rows are
// plain comma joins; writers refuse fields that would break that.

#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "morphome/errors.hpp"
#include "morphome/eval.hpp"
#include "morphome/glmm.hpp"
#include "morphome/gnm.hpp"

namespace morphome {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw DataError("CSV: missing column '" + name + "'");
  }
};

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") != std::string::npos) throw DataError("CSV field contains a delimiter: " + s);
  return s;
}

inline std::string fmt(double v, int precision = 10) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

inline std::string to_csv(const CsvTable& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& f) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) out += ',';
      out += csv_field(f[i]);
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) {
    if (r.size() != t.header.size()) throw DataError("CSV: row width differs from header");
    line(r);
  }
  return out;
}

inline CsvTable parse_csv(std::istream& in, const std::string& what) {
  CsvTable t;
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      const auto comma = l.find(',', start);
      f.push_back(l.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return f;
  };
  if (!std::getline(in, line)) throw DataError(what + ": empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.header = split(line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split(line);
    if (f.size() != t.header.size()) throw DataError(what + ": row has " + std::to_string(f.size()) + " fields, expected " +
                                                     std::to_string(t.header.size()));
    t.rows.push_back(std::move(f));
  }
  return t;
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return parse_csv(in, path);
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// ---------------------------------------------------------------------------
// ResponseRecord

inline const std::vector<std::string>& response_header() {
  static const std::vector<std::string> h{"item_id",        "responder_id",   "condition",  "target",
                                          "predicted",      "classification", "stem_correct", "suffix_correct",
                                          "seq_correct"};
  return h;
}

inline std::string responses_csv(const std::vector<ResponseRecord>& records) {
  CsvTable t{response_header(), {}};
  for (const auto& r : records)
    t.rows.push_back({r.item_id, r.responder_id, r.condition, r.target.str(), join(r.predicted),
                      to_string(r.classification), r.stem_correct ? "1" : "0", r.suffix_correct ? "1" : "0",
                      r.seq_correct ? "1" : "0"});
  return to_csv(t);
}

inline std::vector<ResponseRecord> parse_responses(const CsvTable& t) {
  const std::size_t c_item = t.column("item_id"), c_resp = t.column("responder_id"), c_cond = t.column("condition"),
                    c_tgt = t.column("target"), c_pred = t.column("predicted"), c_cls = t.column("classification"),
                    c_stem = t.column("stem_correct"), c_suf = t.column("suffix_correct"), c_seq = t.column("seq_correct");
  auto flag = [](const std::string& s) {
    if (s == "1") return true;
    if (s == "0") return false;
    throw DataError("response CSV: boolean field '" + s + "'");
  };
  std::vector<ResponseRecord> out;
  for (const auto& r : t.rows) {
    ResponseRecord rec;
    rec.item_id = r[c_item];
    rec.responder_id = r[c_resp];
    rec.condition = r[c_cond];
    rec.target = CellTag::parse(r[c_tgt]);
    rec.predicted = split_ws(r[c_pred]);
    rec.classification = parse_response_class(r[c_cls]);
    rec.stem_correct = flag(r[c_stem]);
    rec.suffix_correct = flag(r[c_suf]);
    rec.seq_correct = flag(r[c_seq]);
    out.push_back(std::move(rec));
  }
  return out;
}

inline std::vector<ResponseRecord> read_responses(const std::string& path) { return parse_responses(read_csv(path)); }

// ---------------------------------------------------------------------------
// Wordlikeness scores

inline std::string scores_csv(const std::vector<WordlikenessScore>& scores) {
  CsvTable t{{"item_id", "raw", "log10_raw"}, {}};
  for (const auto& s : scores) t.rows.push_back({s.item_id, fmt(s.raw, 17), fmt(s.log10_raw, 17)});
  return to_csv(t);
}

inline std::vector<WordlikenessScore> read_scores(const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::size_t ci = t.column("item_id"), cr = t.column("raw"), cl = t.column("log10_raw");
  std::vector<WordlikenessScore> out;
  for (const auto& r : t.rows) out.push_back({r[ci], std::stod(r[cr]), std::stod(r[cl])});
  return out;
}

}  // namespace morphome
