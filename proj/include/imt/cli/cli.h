// Copyright 2026 The imtkit Authors.
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

#ifndef IMT_CLI_CLI_H_
#define IMT_CLI_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace imt::cli {

// Entry point of the `imt` tool. `args` excludes the program name. Returns
// the process exit code: 0 on success, nonzero with a diagnostic on `err`.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace imt::cli

#endif  // IMT_CLI_CLI_H_
