// Copyright 2026 The frc-kit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "frckit/error.hpp"
#include "frckit/imagekit.hpp"

namespace frckit {

namespace {

static_assert(std::endian::native == std::endian::little,
              "raster I/O assumes a little-endian host");

constexpr std::array<char, 4> kFimgMagic{'F', 'I', 'M', 'G'};

std::string describe(const std::filesystem::path& path) { return "'" + path.string() + "'"; }

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw InputError("file not found: " + describe(path));
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open " + describe(path));
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Cursor over a netpbm header: whitespace separated integers with '#'
/// comments running to end of line.
class NetpbmReader {
public:
  NetpbmReader(const std::vector<unsigned char>& bytes, const std::filesystem::path& path)
      : bytes_(bytes), path_(path) {}

  long next_int() {
    skip_space();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw InputError("malformed netpbm header in " + describe(path_));
    }
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > (1L << 30)) {
        throw InputError("malformed netpbm header in " + describe(path_));
      }
      ++pos_;
    }
    return v;
  }

  /// Binary payload starts after exactly one whitespace byte.
  std::size_t binary_start() {
    if (pos_ >= bytes_.size()) {
      throw InputError("truncated file " + describe(path_));
    }
    return pos_ + 1;
  }

private:
  void skip_space() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
          ++pos_;
        }
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 2;
};

Image read_netpbm(const std::vector<unsigned char>& bytes, const std::filesystem::path& path) {
  const char kind = static_cast<char>(bytes[1]);
  const bool binary = kind == '5' || kind == '6';
  const int channels = (kind == '3' || kind == '6') ? 3 : 1;
  NetpbmReader reader(bytes, path);
  const long cols = reader.next_int();
  const long rows = reader.next_int();
  const long maxval = reader.next_int();
  if (rows <= 0 || cols <= 0) {
    throw InputError("zero-sized image in " + describe(path));
  }
  if (maxval <= 0 || maxval > 65535) {
    throw InputError("unsupported maxval " + std::to_string(maxval) + " in " + describe(path));
  }
  const std::size_t count = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  const double scale = 1.0 / static_cast<double>(maxval);
  std::vector<double> pixels(count, 0.0);

  if (binary) {
    const std::size_t width = maxval > 255 ? 2 : 1;
    std::size_t pos = reader.binary_start();
    if (bytes.size() < pos + count * static_cast<std::size_t>(channels) * width) {
      throw InputError("truncated pixel data in " + describe(path));
    }
    for (std::size_t i = 0; i < count; ++i) {
      double sum = 0.0;
      for (int c = 0; c < channels; ++c) {
        unsigned v = bytes[pos++];
        if (width == 2) {
          v = (v << 8) | bytes[pos++];
        }
        sum += static_cast<double>(v);
      }
      pixels[i] = sum / channels * scale;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      double sum = 0.0;
      for (int c = 0; c < channels; ++c) {
        sum += static_cast<double>(reader.next_int());
      }
      pixels[i] = sum / channels * scale;
    }
  }
  return Image(static_cast<int>(rows), static_cast<int>(cols), std::move(pixels));
}

std::uint32_t read_u32(const unsigned char* p) {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

Image read_fimg(const std::vector<unsigned char>& bytes, const std::filesystem::path& path) {
  if (bytes.size() < 12) {
    throw InputError("truncated FIMG header in " + describe(path));
  }
  const std::uint32_t rows = read_u32(bytes.data() + 4);
  const std::uint32_t cols = read_u32(bytes.data() + 8);
  if (rows == 0 || cols == 0) {
    throw InputError("zero-sized image in " + describe(path));
  }
  const std::size_t count = static_cast<std::size_t>(rows) * cols;
  if (bytes.size() != 12 + 4 * count) {
    throw InputError("FIMG payload size does not match header in " + describe(path));
  }
  std::vector<double> pixels(count);
  for (std::size_t i = 0; i < count; ++i) {
    float v;
    std::memcpy(&v, bytes.data() + 12 + 4 * i, 4);
    pixels[i] = static_cast<double>(v);
  }
  return Image(static_cast<int>(rows), static_cast<int>(cols), std::move(pixels));
}

} // namespace

Image load_image(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  if (bytes.size() >= 4 && std::equal(kFimgMagic.begin(), kFimgMagic.end(), bytes.begin())) {
    return read_fimg(bytes, path);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] >= '2' && bytes[1] <= '6' &&
      bytes[1] != '4') {
    return read_netpbm(bytes, path);
  }
  throw InputError("unsupported image format: " + describe(path));
}

void save_image(const Image& img, const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  save_image(img, path, ext == ".pgm" ? ImageFormat::pgm : ImageFormat::fimg);
}

void save_image(const Image& img, const std::filesystem::path& path, ImageFormat format,
                int pgm_bits) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InputError("cannot write " + describe(path));
  }
  if (format == ImageFormat::fimg) {
    out.write(kFimgMagic.data(), 4);
    const std::uint32_t dims[2] = {static_cast<std::uint32_t>(img.rows()),
                                   static_cast<std::uint32_t>(img.cols())};
    out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    for (double v : img.pixels()) {
      const float f = static_cast<float>(v);
      out.write(reinterpret_cast<const char*>(&f), 4);
    }
  } else {
    if (pgm_bits != 8 && pgm_bits != 16) {
      throw InputError("PGM output supports 8 or 16 bits");
    }
    const int maxval = pgm_bits == 8 ? 255 : 65535;
    out << "P5\n" << img.cols() << " " << img.rows() << "\n" << maxval << "\n";
    for (double v : img.pixels()) {
      const auto q = static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * maxval));
      if (pgm_bits == 16) {
        out.put(static_cast<char>(q >> 8));
      }
      out.put(static_cast<char>(q & 0xff));
    }
  }
  if (!out) {
    throw InputError("failed writing " + describe(path));
  }
}

} // namespace frckit
