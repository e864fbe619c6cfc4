// Copyright 2026 The cqad Authors
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

#include <stdexcept>
#include <string>

namespace cqad {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A parameter combination that puts a physical formula on a pole.
class SingularParameter : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UnphysicalCovariance : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace cqad
