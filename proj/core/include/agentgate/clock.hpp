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

#include <atomic>
#include <cstdint>
#include <memory>

namespace agentgate {

// Injectable time source. All expiry logic (tokens, pending logins,
// failure windows) reads time through this interface so tests can
// drive it deterministically.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::int64_t now_micros() const = 0;
  std::int64_t now_seconds() const { return now_micros() / 1000000; }
};

class SystemClock final : public Clock {
 public:
  std::int64_t now_micros() const override;
};

class ManualClock final : public Clock {
 public:
  explicit ManualClock(std::int64_t start_micros = 0) : micros_(start_micros) {}
  std::int64_t now_micros() const override { return micros_.load(); }
  void set_micros(std::int64_t us) { micros_.store(us); }
  void set_seconds(std::int64_t s) { micros_.store(s * 1000000); }
  void advance_seconds(std::int64_t s) { micros_.fetch_add(s * 1000000); }
  void advance_micros(std::int64_t us) { micros_.fetch_add(us); }

 private:
  std::atomic<std::int64_t> micros_;
};

std::shared_ptr<Clock> system_clock();

}  // namespace agentgate
