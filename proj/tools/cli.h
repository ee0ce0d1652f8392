// Copyright 2026 The uspann Authors.
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


#ifndef USPANN_TOOLS_CLI_H_
#define USPANN_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace uspann::cli {

// Runs the uspann command line with args (program name excluded). Results go
// to out, the resolved configuration and diagnostics to err. Returns the
// process exit code.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace uspann::cli

#endif  // USPANN_TOOLS_CLI_H_
