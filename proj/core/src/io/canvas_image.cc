// Copyright 2026 The odmia Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "odmia/io/canvas_image.h"

#include <png.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <vector>

#include "absl/strings/str_cat.h"
#include "io/file_util.h"

namespace odmia {
namespace {

constexpr int kMaxLevel = 65535;

std::vector<uint16_t> Levels(const Canvas& canvas) {
  const double max = canvas.Max();
  std::vector<uint16_t> levels(canvas.pixels().size(), 0);
  if (!(max > 0.0)) return levels;
  for (size_t i = 0; i < levels.size(); ++i) {
    const double level = std::round(canvas.pixels()[i] / max * kMaxLevel);
    levels[i] = static_cast<uint16_t>(std::clamp(level, 0.0, 65535.0));
  }
  return levels;
}

ImportedCanvas FromLevels(int size, const std::vector<uint16_t>& levels,
                          double scale) {
  std::vector<double> pixels(levels.size());
  for (size_t i = 0; i < levels.size(); ++i) pixels[i] = levels[i] * scale;
  return {Canvas(size, std::move(pixels)), scale};
}

std::string FormatScale(double scale) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", scale);
  return buf;
}

absl::StatusOr<double> ParseScale(std::string_view text) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() ||
      !std::isfinite(v) || v < 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad scale value '", std::string(text), "'"));
  }
  return v;
}

// Reads the next whitespace-delimited header token, skipping comments.
// Records the value of a "# scale" comment in `scale_text`.
bool NextToken(std::string_view bytes, size_t& pos, std::string_view& token,
               std::string_view& scale_text) {
  while (pos < bytes.size()) {
    const char c = bytes[pos];
    if (c == '#') {
      const size_t end = bytes.find('\n', pos);
      std::string_view comment =
          bytes.substr(pos + 1, (end == std::string_view::npos ? bytes.size()
                                                               : end) -
                                    pos - 1);
      while (!comment.empty() && comment.front() == ' ') {
        comment.remove_prefix(1);
      }
      if (comment.starts_with("scale ")) scale_text = comment.substr(6);
      pos = end == std::string_view::npos ? bytes.size() : end + 1;
    } else if (c == ' ' || c == '\n' || c == '\r' || c == '\t') {
      ++pos;
    } else {
      break;
    }
  }
  const size_t start = pos;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    ++pos;
  }
  token = bytes.substr(start, pos - start);
  return !token.empty();
}

struct PngWriteBuffer {
  std::string bytes;
};

void PngWrite(png_structp png, png_bytep data, png_size_t length) {
  auto* buffer = static_cast<PngWriteBuffer*>(png_get_io_ptr(png));
  buffer->bytes.append(reinterpret_cast<const char*>(data), length);
}

void PngFlush(png_structp) {}

struct PngReadBuffer {
  std::string_view bytes;
  size_t pos = 0;
};

void PngRead(png_structp png, png_bytep data, png_size_t length) {
  auto* buffer = static_cast<PngReadBuffer*>(png_get_io_ptr(png));
  if (buffer->pos + length > buffer->bytes.size()) {
    png_error(png, "truncated PNG");
  }
  std::memcpy(data, buffer->bytes.data() + buffer->pos, length);
  buffer->pos += length;
}

}  // namespace

absl::StatusOr<ImageFormat> ParseImageFormat(std::string_view name) {
  if (name == "pgm") return ImageFormat::kPgm;
  if (name == "png") return ImageFormat::kPng;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown image format '", std::string(name), "'"));
}

double ExportScale(const Canvas& canvas) {
  const double max = canvas.Max();
  return max > 0.0 ? max / kMaxLevel : 0.0;
}

std::string EncodePgm(const Canvas& canvas) {
  std::string out = absl::StrCat("P5\n# scale ", FormatScale(ExportScale(canvas)),
                                 "\n", canvas.size(), " ", canvas.size(),
                                 "\n65535\n");
  for (uint16_t level : Levels(canvas)) {
    out.push_back(static_cast<char>(level >> 8));
    out.push_back(static_cast<char>(level & 0xff));
  }
  return out;
}

absl::StatusOr<ImportedCanvas> DecodePgm(std::string_view bytes) {
  size_t pos = 0;
  std::string_view scale_text, magic, width, height, maxval;
  if (!NextToken(bytes, pos, magic, scale_text) || magic != "P5") {
    return absl::InvalidArgumentError("not a binary PGM (P5) file");
  }
  if (!NextToken(bytes, pos, width, scale_text) ||
      !NextToken(bytes, pos, height, scale_text) ||
      !NextToken(bytes, pos, maxval, scale_text)) {
    return absl::InvalidArgumentError("truncated PGM header");
  }
  if (maxval != "65535") {
    return absl::InvalidArgumentError("PGM must be 16-bit (maxval 65535)");
  }
  if (width != height) {
    return absl::InvalidArgumentError("canvas PGM must be square");
  }
  int size = 0;
  auto res = std::from_chars(width.data(), width.data() + width.size(), size);
  if (res.ec != std::errc() || size <= 0) {
    return absl::InvalidArgumentError("bad PGM dimensions");
  }
  if (scale_text.empty()) {
    return absl::InvalidArgumentError("PGM has no '# scale' comment");
  }
  absl::StatusOr<double> scale = ParseScale(scale_text);
  if (!scale.ok()) return scale.status();
  ++pos;  // single whitespace byte after maxval
  const size_t n = static_cast<size_t>(size) * static_cast<size_t>(size);
  if (bytes.size() - std::min(pos, bytes.size()) != 2 * n) {
    return absl::InvalidArgumentError("PGM pixel data has the wrong length");
  }
  std::vector<uint16_t> levels(n);
  for (size_t i = 0; i < n; ++i) {
    levels[i] = static_cast<uint16_t>(
        (static_cast<unsigned char>(bytes[pos + 2 * i]) << 8) |
        static_cast<unsigned char>(bytes[pos + 2 * i + 1]));
  }
  return FromLevels(size, levels, *scale);
}

absl::StatusOr<std::string> EncodePng(const Canvas& canvas) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) return absl::InternalError("png_create_write_struct");
  png_infop info = png_create_info_struct(png);
  PngWriteBuffer buffer;
  const std::vector<uint16_t> levels = Levels(canvas);
  std::vector<png_byte> row(2 * static_cast<size_t>(canvas.size()));
  std::string scale = FormatScale(ExportScale(canvas));
  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return absl::InternalError("PNG encoding failed");
  }
  png_set_write_fn(png, &buffer, PngWrite, PngFlush);
  png_set_IHDR(png, info, canvas.size(), canvas.size(), 16, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_text text{};
  text.compression = PNG_TEXT_COMPRESSION_NONE;
  text.key = const_cast<char*>("scale");
  text.text = scale.data();
  png_set_text(png, info, &text, 1);
  png_write_info(png, info);
  for (int y = 0; y < canvas.size(); ++y) {
    for (int x = 0; x < canvas.size(); ++x) {
      const uint16_t level =
          levels[static_cast<size_t>(y) * canvas.size() + x];
      row[2 * x] = static_cast<png_byte>(level >> 8);
      row[2 * x + 1] = static_cast<png_byte>(level & 0xff);
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return std::move(buffer.bytes);
}

absl::StatusOr<ImportedCanvas> DecodePng(std::string_view bytes) {
  if (bytes.size() < 8 ||
      png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) != 0) {
    return absl::InvalidArgumentError("not a PNG file");
  }
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) return absl::InternalError("png_create_read_struct");
  png_infop info = png_create_info_struct(png);
  PngReadBuffer buffer{bytes, 0};
  std::vector<uint16_t> levels;
  std::vector<png_byte> row;
  std::string scale_text;
  int size = 0;
  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return absl::InvalidArgumentError("PNG decoding failed");
  }
  png_set_read_fn(png, &buffer, PngRead);
  png_read_info(png, info);
  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  if (png_get_bit_depth(png, info) != 16 ||
      png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY ||
      width != height || width == 0) {
    png_destroy_read_struct(&png, &info, nullptr);
    return absl::InvalidArgumentError(
        "canvas PNG must be square 16-bit grayscale");
  }
  size = static_cast<int>(width);
  png_textp texts = nullptr;
  int num_text = 0;
  png_get_text(png, info, &texts, &num_text);
  for (int i = 0; i < num_text; ++i) {
    if (std::strcmp(texts[i].key, "scale") == 0) scale_text = texts[i].text;
  }
  levels.resize(static_cast<size_t>(size) * size);
  row.resize(2 * static_cast<size_t>(size));
  for (int y = 0; y < size; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (int x = 0; x < size; ++x) {
      levels[static_cast<size_t>(y) * size + x] =
          static_cast<uint16_t>((row[2 * x] << 8) | row[2 * x + 1]);
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (scale_text.empty()) {
    return absl::InvalidArgumentError("PNG has no 'scale' text chunk");
  }
  absl::StatusOr<double> scale = ParseScale(scale_text);
  if (!scale.ok()) return scale.status();
  return FromLevels(size, levels, *scale);
}

absl::Status ExportCanvas(const Canvas& canvas, const std::string& path,
                          ImageFormat format) {
  if (format == ImageFormat::kPgm) {
    return io_internal::WriteFile(path, EncodePgm(canvas));
  }
  absl::StatusOr<std::string> png = EncodePng(canvas);
  if (!png.ok()) return png.status();
  return io_internal::WriteFile(path, *png);
}

absl::StatusOr<ImportedCanvas> ImportCanvas(const std::string& path,
                                            ImageFormat format) {
  absl::StatusOr<std::string> bytes = io_internal::ReadFile(path);
  if (!bytes.ok()) return bytes.status();
  return format == ImageFormat::kPgm ? DecodePgm(*bytes) : DecodePng(*bytes);
}

}  // namespace odmia
