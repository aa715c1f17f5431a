/* Copyright 2026 The memsim Authors. All Rights Reserved.
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

#include "memsim/core/params.hpp"

#include <cmath>

#include "memsim/core/error.hpp"

namespace memsim::core {

void MemoryParams::validate() const {
  if (!std::isfinite(d) || d < 0.0) throw DomainError("d must be finite and >= 0");
  if (!std::isfinite(delta)) throw DomainError("delta must be finite");
  if (!std::isfinite(gamma_b) || gamma_b < 0.0) throw DomainError("gamma_b must be finite and >= 0");
}

}  // namespace memsim::core
