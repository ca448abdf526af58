// Copyright 2026 The Dilemma Lab Authors
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

#include "dilemma_lab/policy.h"

namespace dilemma_lab {

std::string ConstantActionPolicy::Describe() const {
  return "constant(" + std::to_string(action_) + ")";
}

std::vector<const Policy*> PolicyView(
    const std::vector<std::unique_ptr<Policy>>& policies) {
  std::vector<const Policy*> view;
  view.reserve(policies.size());
  for (const auto& p : policies) view.push_back(p.get());
  return view;
}

}  // namespace dilemma_lab
