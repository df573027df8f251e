/*
 * Copyright 2026 The MAPDA-MIR Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mapda::cli {

/// Exit codes shared by every command.
inline constexpr int kOk = 0;
inline constexpr int kDomainFailure = 1;  // validation, constraint, infeasible, decode
inline constexpr int kInputFailure = 2;   // parse, I/O, bad flags

/// Runs the command line `args` (without the program name). Reads stdin from
/// `in` where a command takes "-" or no input path.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace mapda::cli
