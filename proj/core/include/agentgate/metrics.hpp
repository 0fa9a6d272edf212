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

#include <array>
#include <atomic>
#include <cstdint>
#include <string>

#include "agentgate/audit.hpp"

namespace agentgate::gateway {

// Lock-free counters plus a fixed-bucket latency histogram, rendered
// as plain text for GET /metrics.
class Metrics {
 public:
  static constexpr std::int64_t kBucketBoundsUs[] = {
      100, 250, 500, 1000, 2500, 5000, 10000, 25000, 50000, 100000, 250000, 1000000};
  static constexpr std::size_t kBucketCount = std::size(kBucketBoundsUs) + 1;

  void count_decision(audit::Decision d);
  void count_sink_failure();
  void observe_latency_us(std::int64_t us);

  std::uint64_t requests_total() const;
  std::uint64_t decision_count(audit::Decision d) const;
  std::uint64_t sink_failures() const;

  std::string render() const;

 private:
  std::array<std::atomic<std::uint64_t>, 6> decisions_{};
  std::atomic<std::uint64_t> sink_failures_{0};
  std::array<std::atomic<std::uint64_t>, kBucketCount> buckets_{};
  std::atomic<std::uint64_t> latency_count_{0};
  std::atomic<std::int64_t> latency_sum_us_{0};
};

}  // namespace agentgate::gateway
