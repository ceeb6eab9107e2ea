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

#ifndef ODMIA_IO_FILE_UTIL_H_
#define ODMIA_IO_FILE_UTIL_H_

#include <charconv>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace odmia::io_internal {

// NotFound when the file cannot be opened.
absl::StatusOr<std::string> ReadFile(const std::string& path);

// Internal ("I/O error ...") when the file cannot be written.
absl::Status WriteFile(const std::string& path, std::string_view contents);

// Shortest decimal text that parses back to `v`.
inline std::string FormatDouble(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace odmia::io_internal

#endif  // ODMIA_IO_FILE_UTIL_H_
