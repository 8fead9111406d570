// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Checkpoint container, version 1:
//
//   offset 0   8 bytes   magic "MORPHCKP"
//   offset 8   u32 LE    format version (1)
//   offset 12  u64 LE    header length H
//   offset 20  H bytes   UTF-8 JSON header: model_config, train_config,
//                        vocab (token list, id order), update, epoch,
//                        rng_state, dtype ("f32"|"f64"),
//                        tensors [{name, rows, cols}]
//   then       tensor payloads in header order, row-major, IEEE-754 LE

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "morphome/errors.hpp"
#include "morphome/nn/config.hpp"
#include "morphome/nn/transformer.hpp"
#include "morphome/nn/vocab.hpp"
#include "morphome/random.hpp"

namespace morphome::nn {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

inline constexpr char kCheckpointMagic[8] = {'M', 'O', 'R', 'P', 'H', 'C', 'K', 'P'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

template <class T>
struct Checkpoint {
  TrainConfig train_config;
  Vocab vocab;
  long update = 0;
  int epoch = 0;
  std::string rng_state;
  Transformer<T> model;
};

template <class T>
constexpr const char* dtype_name() {
  static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>);
  return std::is_same_v<T, float> ? "f32" : "f64";
}

inline std::string rng_state(const Rng& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

inline Rng rng_from_state(const std::string& s) {
  Rng rng;
  if (s.empty()) return rng;
  std::istringstream is(s);
  is >> rng;
  if (!is) throw DataError("checkpoint: corrupt RNG state");
  return rng;
}

template <class T>
void save_checkpoint(const std::string& path, const Checkpoint<T>& ck) {
  const auto& params = ck.model.params();
  nlohmann::json h;
  h["model_config"] = ck.model.config();
  h["train_config"] = ck.train_config;
  h["vocab"] = ck.vocab.tokens();
  h["update"] = ck.update;
  h["epoch"] = ck.epoch;
  h["rng_state"] = ck.rng_state;
  h["dtype"] = dtype_name<T>();
  h["tensors"] = nlohmann::json::array();
  for (std::size_t i = 0; i < params.size(); ++i)
    h["tensors"].push_back({{"name", params.names[i]}, {"rows", params[i].rows()}, {"cols", params[i].cols()}});
  const std::string header = h.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write checkpoint " + path);
  out.write(kCheckpointMagic, sizeof kCheckpointMagic);
  const std::uint32_t version = kCheckpointVersion;
  const std::uint64_t hlen = header.size();
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&hlen), sizeof hlen);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (const auto& t : params.tensors)
    out.write(reinterpret_cast<const char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(T)));
  if (!out) throw DataError("failed writing checkpoint " + path);
}

namespace detail {
template <class Stored, class T>
void read_tensor(std::istream& in, Mat<T>& dst) {
  std::vector<Stored> buf(static_cast<std::size_t>(dst.size()));
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(Stored)));
  if (!in) throw DataError("checkpoint: truncated tensor payload");
  for (std::size_t k = 0; k < buf.size(); ++k) dst.data()[k] = static_cast<T>(buf[k]);
}
}  // namespace detail

// Loads into scalar type T, converting if the file stores the other width.
template <class T>
Checkpoint<T> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path);
  char magic[8];
  std::uint32_t version = 0;
  std::uint64_t hlen = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&hlen), sizeof hlen);
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0) throw DataError(path + " is not a checkpoint");
  if (version != kCheckpointVersion) throw DataError("unsupported checkpoint version " + std::to_string(version));
  if (hlen > (1u << 26)) throw DataError("checkpoint header too large");
  std::string header(hlen, '\0');
  in.read(header.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw DataError("checkpoint: truncated header");

  Checkpoint<T> ck;
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(header);
    const auto mc = h.at("model_config").get<ModelConfig>();
    ck.train_config = h.at("train_config").get<TrainConfig>();
    const auto toks = h.at("vocab").get<std::vector<std::string>>();
    if (toks.size() < 3) throw DataError("checkpoint: vocabulary lacks specials");
    ck.vocab = Vocab(std::vector<std::string>(toks.begin() + 3, toks.end()));
    ck.update = h.at("update").get<long>();
    ck.epoch = h.at("epoch").get<int>();
    ck.rng_state = h.at("rng_state").get<std::string>();
    ck.model = Transformer<T>(mc, ck.vocab.size());
  } catch (const nlohmann::json::exception& e) {
    throw DataError("checkpoint header: " + std::string(e.what()));
  }
  const std::string dtype = h.at("dtype").get<std::string>();
  auto& params = ck.model.params();
  const auto& specs = h.at("tensors");
  if (specs.size() != params.size()) throw DataError("checkpoint: tensor count does not match model config");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (specs[i].at("name").get<std::string>() != params.names[i] || specs[i].at("rows").get<Index>() != params[i].rows() ||
        specs[i].at("cols").get<Index>() != params[i].cols())
      throw DataError("checkpoint: tensor " + params.names[i] + " has unexpected name or shape");
    if (dtype == "f32") detail::read_tensor<float>(in, params[i]);
    else if (dtype == "f64") detail::read_tensor<double>(in, params[i]);
    else throw DataError("checkpoint: unknown dtype " + dtype);
  }
  return ck;
}

}  // namespace morphome::nn
