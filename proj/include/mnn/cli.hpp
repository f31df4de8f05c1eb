// Copyright 2026 The mnn-assoc Authors
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

#ifndef MNN_CLI_HPP_
#define MNN_CLI_HPP_

#include <string>
#include <vector>

namespace mnn {

// Runs the mnn-assoc command line. `args` excludes the program name.
// Returns 0 on success, 1 on operational failure, 2 on usage errors.
int run_cli(const std::vector<std::string>& args);

}  // namespace mnn

#endif  // MNN_CLI_HPP_
