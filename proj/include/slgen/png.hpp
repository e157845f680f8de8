#pragma once

// Minimal PNG support for 8-bit non-interlaced images: enough to write the
// conditioning frames and read them (and similar trainer output) back for QC.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <zlib.h>

#include "slgen/common.hpp"

namespace slgen::png {

struct Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> rgb;  // 3 bytes per pixel, row-major

  bool operator==(const Image&) const = default;
};

namespace detail {

inline void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(uint8_t(v >> 24));
  out.push_back(uint8_t(v >> 16));
  out.push_back(uint8_t(v >> 8));
  out.push_back(uint8_t(v));
}

inline uint32_t get_u32(const uint8_t* p) {
  return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | uint32_t(p[3]);
}

inline void put_chunk(std::vector<uint8_t>& out, const char type[4], const std::vector<uint8_t>& data) {
  put_u32(out, uint32_t(data.size()));
  size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  uint32_t crc = uint32_t(::crc32(0, out.data() + start, uInt(out.size() - start)));
  put_u32(out, crc);
}

}  // namespace detail

inline std::vector<uint8_t> encode(const Image& img) {
  if (img.width <= 0 || img.height <= 0 || img.rgb.size() != size_t(img.width) * img.height * 3)
    fail(Errc::DataError, "malformed image buffer");
  std::vector<uint8_t> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  std::vector<uint8_t> ihdr;
  detail::put_u32(ihdr, uint32_t(img.width));
  detail::put_u32(ihdr, uint32_t(img.height));
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(2);   // color type RGB
  ihdr.push_back(0);   // compression
  ihdr.push_back(0);   // filter
  ihdr.push_back(0);   // interlace
  detail::put_chunk(out, "IHDR", ihdr);

  std::vector<uint8_t> raw;
  raw.reserve(size_t(img.height) * (size_t(img.width) * 3 + 1));
  for (int y = 0; y < img.height; ++y) {
    raw.push_back(0);  // filter: none
    const uint8_t* row = img.rgb.data() + size_t(y) * img.width * 3;
    raw.insert(raw.end(), row, row + size_t(img.width) * 3);
  }
  uLongf bound = ::compressBound(uLong(raw.size()));
  std::vector<uint8_t> z(bound);
  if (::compress2(z.data(), &bound, raw.data(), uLong(raw.size()), 6) != Z_OK)
    fail(Errc::IoError, "deflate failed");
  z.resize(bound);
  detail::put_chunk(out, "IDAT", z);
  detail::put_chunk(out, "IEND", {});
  return out;
}

inline void save(const std::string& path, const Image& img) {
  auto bytes = encode(img);
  std::ofstream f(path, std::ios::binary);
  if (!f.good()) fail(Errc::IoError, "cannot write " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
}

inline Image decode(const std::vector<uint8_t>& bytes) {
  static const uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() < 8 || std::memcmp(bytes.data(), sig, 8) != 0) fail(Errc::DataError, "not a PNG");
  size_t pos = 8;
  int width = 0, height = 0, bit_depth = 0, color_type = 0, interlace = 0;
  std::vector<uint8_t> idat;
  while (pos + 8 <= bytes.size()) {
    uint32_t len = detail::get_u32(bytes.data() + pos);
    if (pos + 12 + len > bytes.size()) fail(Errc::DataError, "truncated PNG chunk");
    std::string type(reinterpret_cast<const char*>(bytes.data() + pos + 4), 4);
    const uint8_t* data = bytes.data() + pos + 8;
    if (type == "IHDR") {
      width = int(detail::get_u32(data));
      height = int(detail::get_u32(data + 4));
      bit_depth = data[8];
      color_type = data[9];
      interlace = data[12];
    } else if (type == "IDAT") {
      idat.insert(idat.end(), data, data + len);
    } else if (type == "IEND") {
      break;
    }
    pos += 12 + len;
  }
  if (width <= 0 || height <= 0) fail(Errc::DataError, "bad PNG dimensions");
  if (bit_depth != 8 || interlace != 0) fail(Errc::DataError, "only 8-bit non-interlaced PNG supported");
  int channels;
  switch (color_type) {
    case 0: channels = 1; break;
    case 2: channels = 3; break;
    case 4: channels = 2; break;
    case 6: channels = 4; break;
    default: fail(Errc::DataError, "unsupported PNG color type");
  }
  size_t stride = size_t(width) * channels;
  std::vector<uint8_t> raw(size_t(height) * (stride + 1));
  uLongf raw_len = uLongf(raw.size());
  if (::uncompress(raw.data(), &raw_len, idat.data(), uLong(idat.size())) != Z_OK || raw_len != raw.size())
    fail(Errc::DataError, "PNG inflate failed");

  // undo per-scanline filters
  std::vector<uint8_t> img(size_t(height) * stride);
  for (int y = 0; y < height; ++y) {
    uint8_t filter = raw[size_t(y) * (stride + 1)];
    const uint8_t* src = raw.data() + size_t(y) * (stride + 1) + 1;
    uint8_t* dst = img.data() + size_t(y) * stride;
    const uint8_t* up = y > 0 ? img.data() + size_t(y - 1) * stride : nullptr;
    for (size_t x = 0; x < stride; ++x) {
      int a = x >= size_t(channels) ? dst[x - channels] : 0;
      int b = up ? up[x] : 0;
      int c = (up && x >= size_t(channels)) ? up[x - channels] : 0;
      int v = src[x];
      switch (filter) {
        case 0: break;
        case 1: v += a; break;
        case 2: v += b; break;
        case 3: v += (a + b) / 2; break;
        case 4: {
          int p = a + b - c;
          int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
          v += (pa <= pb && pa <= pc) ? a : (pb <= pc ? b : c);
          break;
        }
        default: fail(Errc::DataError, "unknown PNG filter");
      }
      dst[x] = uint8_t(v);
    }
  }

  Image out;
  out.width = width;
  out.height = height;
  out.rgb.resize(size_t(width) * height * 3);
  for (size_t i = 0, n = size_t(width) * height; i < n; ++i) {
    const uint8_t* px = img.data() + i * channels;
    uint8_t r, g, b;
    switch (color_type) {
      case 0: r = g = b = px[0]; break;
      case 4: r = g = b = px[0]; break;
      case 2: r = px[0]; g = px[1]; b = px[2]; break;
      default: r = px[0]; g = px[1]; b = px[2]; break;  // RGBA drops alpha
    }
    out.rgb[i * 3] = r;
    out.rgb[i * 3 + 1] = g;
    out.rgb[i * 3 + 2] = b;
  }
  return out;
}

inline Image load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f.good()) fail(Errc::IoError, "cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return decode(bytes);
}

}  // namespace slgen::png
