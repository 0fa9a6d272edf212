// Copyright 2026 the agentgate authors
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

#include <cstdint>
#include <mutex>
#include <string>
#include <unordered_map>

namespace agentgate::auth {

// Opaque handles bridging the password step and the second-factor step
// of a two-step login. A handle is single use and expires a fixed
// window after issuance; expiry and reuse are distinguishable so the
// gateway can answer 410 vs 409.
class PendingTokenStore {
 public:
  static constexpr std::int64_t kDefaultWindowSeconds = 120;

  explicit PendingTokenStore(std::int64_t window_seconds = kDefaultWindowSeconds);

  std::string issue(const std::string& username, std::int64_t now_micros);

  enum class Status { Ok, Unknown, AlreadyUsed, Expired };

  struct Lookup {
    Status status = Status::Unknown;
    std::string username;  // set unless status == Unknown
  };

  // Non-destructive classification, checked in the order unknown,
  // already-used, expired.
  Lookup peek(const std::string& handle, std::int64_t now_micros) const;

  // Marks the handle used iff it is currently Ok; returns the same
  // classification peek would have. At most one caller can ever get Ok
  // for a given handle.
  Status consume(const std::string& handle, std::int64_t now_micros);

  std::size_t size() const;

 private:
  struct Entry {
    std::string username;
    std::int64_t deadline_micros = 0;
    bool used = false;
  };

  Status classify(const Entry& e, std::int64_t now_micros) const;

  mutable std::mutex mu_;
  std::unordered_map<std::string, Entry> entries_;
  std::int64_t window_micros_;
};

}  // namespace agentgate::auth
