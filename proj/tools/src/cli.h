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

#ifndef ODMIA_TOOLS_CLI_H_
#define ODMIA_TOOLS_CLI_H_

#include <ostream>

namespace odmia::cli {

// Runs the odmia command line. Returns the process exit code: 0 when every
// output was written and read back intact, 1 on a runtime error, and the
// CLI11 parse code (with usage text on err) on a bad command line.
int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace odmia::cli

#endif  // ODMIA_TOOLS_CLI_H_
