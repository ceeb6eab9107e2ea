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

// 16-bit grayscale export of canvases.
//
// Pixel value v maps to gray level round(v / scale) with
// scale = max(canvas) / 65535, so the brightest pixel is 65535; an all-zero
// canvas has scale 0 and exports as all zeros. Re-importing multiplies
// levels by the recorded scale, which recovers every pixel to within
// scale / 2.
//
// PGM files are binary (P5) with the scale in a header comment:
//
//   P5
//   # scale 0.00056060...
//   <S> <S>
//   65535
//   <S*S big-endian 16-bit samples, row 0 first>
//
// PNG files carry the scale in a tEXt chunk with keyword "scale".

#ifndef ODMIA_IO_CANVAS_IMAGE_H_
#define ODMIA_IO_CANVAS_IMAGE_H_

#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "odmia/canvas.h"

namespace odmia {

enum class ImageFormat { kPgm, kPng };

absl::StatusOr<ImageFormat> ParseImageFormat(std::string_view name);

struct ImportedCanvas {
  Canvas canvas;
  double scale = 0.0;
};

double ExportScale(const Canvas& canvas);

std::string EncodePgm(const Canvas& canvas);
absl::StatusOr<ImportedCanvas> DecodePgm(std::string_view bytes);

absl::StatusOr<std::string> EncodePng(const Canvas& canvas);
absl::StatusOr<ImportedCanvas> DecodePng(std::string_view bytes);

absl::Status ExportCanvas(const Canvas& canvas, const std::string& path,
                          ImageFormat format);
absl::StatusOr<ImportedCanvas> ImportCanvas(const std::string& path,
                                            ImageFormat format);

}  // namespace odmia

#endif  // ODMIA_IO_CANVAS_IMAGE_H_
