/* Copyright 2026 The SBAM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SBAM_TOOLS_CLI_H_
#define SBAM_TOOLS_CLI_H_

#include <ostream>

namespace sbam::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kRuntimeError = 1;  // unreadable input, bad file, ...
inline constexpr int kUsageError = 2;    // bad flag, config key or value

// Entry point of the sbam tool. Progress goes to out; the resolved
// configuration and any error message go to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sbam::cli

#endif  // SBAM_TOOLS_CLI_H_
