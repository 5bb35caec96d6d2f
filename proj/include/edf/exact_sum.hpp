// Copyright 2026 The edfola Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

namespace edf {

/// Error-free floating-point accumulator (Shewchuk expansion). value() is the
/// correctly rounded sum of everything added, so it does not depend on the
/// order of additions or merges.
class ExactSum {
 public:
  void add(double x);
  void merge(const ExactSum& other);
  double value() const;
  bool empty() const { return partials_.empty() && special_ == 0.0; }

 private:
  std::vector<double> partials_;  ///< non-overlapping, increasing magnitude
  double special_ = 0.0;          ///< naive sum of non-finite inputs
};

}  // namespace edf
