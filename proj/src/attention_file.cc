// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pixground/attention_file.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "pixground/error.h"

namespace pixground {
namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes[offset + i]} << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_attention(std::span<const Grid> grids) {
  if (grids.empty()) throw InvalidArgument("attention file needs at least one grid");
  const std::size_t rows = grids.front().rows();
  const std::size_t cols = grids.front().cols();
  if (rows == 0 || cols == 0) throw InvalidArgument("attention grid has zero dimension");
  for (std::size_t i = 0; i < grids.size(); ++i) {
    if (grids[i].rows() != rows || grids[i].cols() != cols) {
      throw InvalidArgument("attention grid " + std::to_string(i) + " is " +
                            std::to_string(grids[i].rows()) + "x" +
                            std::to_string(grids[i].cols()) + ", expected " +
                            std::to_string(rows) + "x" + std::to_string(cols));
    }
    for (double v : grids[i].cells()) {
      if (!std::isfinite(v)) {
        throw InvalidArgument("attention grid " + std::to_string(i) +
                              " contains a non-finite value");
      }
    }
  }

  std::vector<std::uint8_t> out;
  out.reserve(kAttentionHeaderBytes + grids.size() * rows * cols * 4);
  out.insert(out.end(), std::begin(kAttentionMagic), std::end(kAttentionMagic));
  put_u32(out, kAttentionVersion);
  put_u32(out, static_cast<std::uint32_t>(grids.size()));
  put_u32(out, static_cast<std::uint32_t>(rows));
  put_u32(out, static_cast<std::uint32_t>(cols));
  for (const auto& g : grids) {
    for (double v : g.cells()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  return out;
}

AttentionRun decode_attention(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kAttentionHeaderBytes) {
    throw FormatError("attention file truncated: header needs 20 bytes, got " +
                      std::to_string(bytes.size()));
  }
  if (std::memcmp(bytes.data(), kAttentionMagic, 4) != 0) {
    throw FormatError("attention file has bad magic (expected \"ATNG\")");
  }
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kAttentionVersion) {
    throw FormatError("attention file version " + std::to_string(version) +
                      " unsupported");
  }
  const std::uint32_t n = get_u32(bytes, 8);
  const std::uint32_t h = get_u32(bytes, 12);
  const std::uint32_t w = get_u32(bytes, 16);
  if (n == 0 || h == 0 || w == 0) {
    throw FormatError("attention file header has zero dimension");
  }
  const std::uint64_t expected =
      kAttentionHeaderBytes + std::uint64_t{n} * h * w * 4;
  if (bytes.size() < expected) {
    throw FormatError("attention file truncated: expected " + std::to_string(expected) +
                      " bytes, got " + std::to_string(bytes.size()));
  }
  if (bytes.size() > expected) {
    throw FormatError("attention file has " + std::to_string(bytes.size() - expected) +
                      " trailing bytes");
  }

  AttentionRun run{h, w, {}};
  run.grids.reserve(n);
  std::size_t offset = kAttentionHeaderBytes;
  for (std::uint32_t t = 0; t < n; ++t) {
    std::vector<double> cells(std::size_t{h} * w);
    for (auto& c : cells) {
      float f = std::bit_cast<float>(get_u32(bytes, offset));
      if (!std::isfinite(f)) {
        throw FormatError("attention file token " + std::to_string(t) +
                          " contains a non-finite value");
      }
      c = f;
      offset += 4;
    }
    run.grids.emplace_back(h, w, std::move(cells));
  }
  return run;
}

std::size_t write_attention_file(std::span<const Grid> grids,
                                 const std::filesystem::path& path) {
  auto bytes = encode_attention(grids);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path.string());
  return bytes.size();
}

AttentionRun read_attention_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open attention file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_attention(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace pixground
