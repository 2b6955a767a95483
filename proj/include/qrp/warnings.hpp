// Copyright 2026 The QRP Authors
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

#include <string>
#include <vector>

namespace qrp {

/// Collects non-fatal numerical notes (imaginary residues, degeneracies)
/// for the run manifest.
class WarningLog {
  public:
    void add(std::string message) { messages_.push_back(std::move(message)); }
    const std::vector<std::string> &messages() const { return messages_; }
    bool empty() const { return messages_.empty(); }

  private:
    std::vector<std::string> messages_;
};

} // namespace qrp
