// Copyright 2026 The memprop Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "memprop/errors.hpp"
#include "memprop/io.hpp"

namespace memprop {

namespace {

constexpr char kMagic[4] = {'D', 'M', 'P', 'F'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff),
                         static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
    throw IoError("truncated feature map file");
  }
  return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) |
         (static_cast<std::uint32_t>(bytes[3]) << 24);
}

}  // namespace

void write_feature_map(std::ostream& out, const FeatureMap& map) {
  out.write(kMagic, 4);
  out.put(static_cast<char>(kFeatureFileVersion));
  put_u32(out, static_cast<std::uint32_t>(map.height()));
  put_u32(out, static_cast<std::uint32_t>(map.width()));
  put_u32(out, static_cast<std::uint32_t>(map.channels()));
  for (double v : map.data()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  if (!out) throw IoError("failed writing feature map");
}

FeatureMap read_feature_map(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::string(magic, 4) != std::string(kMagic, 4)) {
    throw IoError("not a feature map file (bad magic)");
  }
  const int version = in.get();
  if (version != kFeatureFileVersion) {
    throw IoError("unsupported feature map version " + std::to_string(version));
  }
  const std::uint32_t h = get_u32(in);
  const std::uint32_t w = get_u32(in);
  const std::uint32_t c = get_u32(in);
  if (h == 0 || w == 0 || c == 0 || static_cast<std::uint64_t>(h) * w * c > (1ull << 30)) {
    throw IoError("feature map file has invalid dimensions");
  }
  std::vector<double> data(static_cast<std::size_t>(h) * w * c);
  for (double& v : data) {
    v = std::bit_cast<float>(get_u32(in));
    if (!std::isfinite(v)) throw IoError("feature map file holds a non-finite value");
  }
  return FeatureMap(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c),
                    std::move(data));
}

void write_feature_file(const std::filesystem::path& path, const FeatureMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path.string());
  write_feature_map(out, map);
}

FeatureMap read_feature_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return read_feature_map(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace memprop
