// Copyright 2026 The aqec Authors
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


#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aqec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // physics or integration failure
inline constexpr int kExitUsage = 2;    // usage or configuration error

/**
 * Parse and execute one invocation. `args` excludes the program name.
 * Data goes to `out`, diagnostics to `err`; never reads stdin.
 */
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aqec::cli
