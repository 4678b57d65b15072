#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "prior/io_util.hpp"
#include "prior/random.hpp"
#include "prior/types.hpp"

namespace prior {

// Row-major range image with a per-pixel validity mask. Invalid pixels hold 0.
struct DepthImage {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> values;
  std::vector<std::uint8_t> valid;

  DepthImage() = default;
  DepthImage(std::size_t r, std::size_t c, float fill = 0.0f)
      : rows(r), cols(c), values(r * c, fill), valid(r * c, 1) {}

  float& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  float at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  bool is_valid(std::size_t r, std::size_t c) const { return valid[r * cols + c] != 0; }

  friend bool operator==(const DepthImage&, const DepthImage&) = default;
};

inline constexpr std::size_t kRenderRows = 45, kRenderCols = 80;
inline constexpr std::size_t kCropRows = 36, kCropCols = 64;

inline DepthImage center_crop(const DepthImage& img, std::size_t out_rows = kCropRows,
                              std::size_t out_cols = kCropCols) {
  if (img.rows < out_rows || img.cols < out_cols) {
    throw DimensionError("center crop: input " + std::to_string(img.rows) + "x" + std::to_string(img.cols) +
                         " smaller than " + std::to_string(out_rows) + "x" + std::to_string(out_cols));
  }
  const std::size_t r0 = (img.rows - out_rows) / 2;
  const std::size_t c0 = (img.cols - out_cols) / 2;
  DepthImage out(out_rows, out_cols);
  for (std::size_t r = 0; r < out_rows; ++r) {
    const std::size_t src = (r0 + r) * img.cols + c0;
    std::copy_n(img.values.begin() + static_cast<std::ptrdiff_t>(src), out_cols,
                out.values.begin() + static_cast<std::ptrdiff_t>(r * out_cols));
    std::copy_n(img.valid.begin() + static_cast<std::ptrdiff_t>(src), out_cols,
                out.valid.begin() + static_cast<std::ptrdiff_t>(r * out_cols));
  }
  return out;
}

struct DepthNoiseParams {
  double bias_min = -0.04;     // m, one draw per image
  double bias_max = 0.04;
  double noise_sigma = 0.02;   // m, per pixel
  double hole_probability = 0.03;
};

// Draw order: image bias, then per pixel in row-major order a hole trial and,
// for surviving pixels, one Gaussian sample.
inline DepthImage augment_depth(const DepthImage& img, Rng& rng, const DepthNoiseParams& p = {}) {
  if (p.bias_min > p.bias_max) throw DomainError("depth bias range is inverted");
  if (p.noise_sigma < 0.0) throw DomainError("depth noise sigma must be non-negative");
  if (!(p.hole_probability >= 0.0 && p.hole_probability <= 1.0)) {
    throw DomainError("depth hole probability must be in [0, 1]");
  }
  std::uniform_real_distribution<double> bias_dist(p.bias_min, p.bias_max);
  const double bias = p.bias_min == p.bias_max ? p.bias_min : bias_dist(rng);
  std::bernoulli_distribution hole(p.hole_probability);
  std::normal_distribution<double> noise(0.0, p.noise_sigma > 0.0 ? p.noise_sigma : 1.0);

  DepthImage out = img;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (hole(rng)) {
      out.values[i] = 0.0f;
      out.valid[i] = 0;
      continue;
    }
    if (!out.valid[i]) continue;
    const double n = p.noise_sigma > 0.0 ? noise(rng) : 0.0;
    out.values[i] = static_cast<float>(std::max(0.0, static_cast<double>(img.values[i]) + bias + n));
  }
  return out;
}

// Binary depth file, all integers little-endian:
//   0..3   magic "PDI1"
//   4..7   rows (u32)
//   8..11  cols (u32)
//   12..15 flags (u32); bit 0 set when a validity plane follows
//   then rows*cols float32 values, row-major
//   then, if flagged, rows*cols bytes (1 = valid, 0 = hole)
inline constexpr std::array<char, 4> kDepthMagic = {'P', 'D', 'I', '1'};

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

inline std::uint32_t get_u32(const std::string& in, std::size_t pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  return v;
}

}  // namespace detail

inline std::string encode_depth(const DepthImage& img) {
  const bool has_holes = std::any_of(img.valid.begin(), img.valid.end(), [](std::uint8_t v) { return v == 0; });
  std::string out(kDepthMagic.begin(), kDepthMagic.end());
  detail::put_u32(out, static_cast<std::uint32_t>(img.rows));
  detail::put_u32(out, static_cast<std::uint32_t>(img.cols));
  detail::put_u32(out, has_holes ? 1u : 0u);
  for (float v : img.values) detail::put_u32(out, std::bit_cast<std::uint32_t>(v));
  if (has_holes) out.append(img.valid.begin(), img.valid.end());
  return out;
}

inline DepthImage decode_depth(const std::string& bytes) {
  if (bytes.size() < 16 || !std::equal(kDepthMagic.begin(), kDepthMagic.end(), bytes.begin())) {
    throw FormatError("magic", "not a depth image (bad magic)");
  }
  const std::size_t rows = detail::get_u32(bytes, 4);
  const std::size_t cols = detail::get_u32(bytes, 8);
  const std::uint32_t flags = detail::get_u32(bytes, 12);
  const std::size_t n = rows * cols;
  const std::size_t need = 16 + 4 * n + ((flags & 1u) ? n : 0);
  if (bytes.size() != need) throw FormatError("size", "depth image size does not match header");
  DepthImage img(rows, cols);
  for (std::size_t i = 0; i < n; ++i) img.values[i] = std::bit_cast<float>(detail::get_u32(bytes, 16 + 4 * i));
  if (flags & 1u) {
    for (std::size_t i = 0; i < n; ++i) img.valid[i] = bytes[16 + 4 * n + i] ? 1 : 0;
  }
  return img;
}

inline void write_depth(const std::filesystem::path& path, const DepthImage& img) {
  io::write_atomic(path, encode_depth(img));
}

inline DepthImage read_depth(const std::filesystem::path& path) { return decode_depth(io::read_text(path)); }

}  // namespace prior
