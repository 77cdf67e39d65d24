// Copyright 2026 The lfdq Authors.
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


#ifndef LFDQ_SELFTEST_HPP_
#define LFDQ_SELFTEST_HPP_

#include <functional>
#include <string>

namespace lfdq {

// Quick oracle checks of the numerical core, one "PASS ..."/"FAIL ..." line
// per check. Returns the number of failures.
int RunSelftest(const std::function<void(const std::string&)>& emit);

}  // namespace lfdq

#endif  // LFDQ_SELFTEST_HPP_
