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

#include "agentgate/metrics.hpp"

#include <sstream>

namespace agentgate::gateway {

void Metrics::count_decision(audit::Decision d) {
  decisions_[static_cast<std::size_t>(d)].fetch_add(1, std::memory_order_relaxed);
}

void Metrics::count_sink_failure() { sink_failures_.fetch_add(1, std::memory_order_relaxed); }

void Metrics::observe_latency_us(std::int64_t us) {
  std::size_t bucket = kBucketCount - 1;
  for (std::size_t i = 0; i < std::size(kBucketBoundsUs); ++i) {
    if (us <= kBucketBoundsUs[i]) {
      bucket = i;
      break;
    }
  }
  buckets_[bucket].fetch_add(1, std::memory_order_relaxed);
  latency_count_.fetch_add(1, std::memory_order_relaxed);
  latency_sum_us_.fetch_add(us, std::memory_order_relaxed);
}

std::uint64_t Metrics::requests_total() const {
  std::uint64_t total = 0;
  for (audit::Decision d : audit::kRequestDecisions) {
    total += decision_count(d);
  }
  return total;
}

std::uint64_t Metrics::decision_count(audit::Decision d) const {
  return decisions_[static_cast<std::size_t>(d)].load(std::memory_order_relaxed);
}

std::uint64_t Metrics::sink_failures() const {
  return sink_failures_.load(std::memory_order_relaxed);
}

std::string Metrics::render() const {
  std::ostringstream out;
  out << "gate_requests_total " << requests_total() << "\n";
  for (audit::Decision d :
       {audit::Decision::Permit, audit::Decision::Deny, audit::Decision::AuthFail,
        audit::Decision::Blocked, audit::Decision::Alert, audit::Decision::Block}) {
    out << "gate_decision_total{decision=\"" << audit::to_string(d) << "\"} "
        << decision_count(d) << "\n";
  }
  out << "gate_audit_sink_failures_total " << sink_failures() << "\n";
  const std::uint64_t count = latency_count_.load(std::memory_order_relaxed);
  const std::int64_t sum = latency_sum_us_.load(std::memory_order_relaxed);
  out << "gate_request_latency_us_count " << count << "\n";
  out << "gate_request_latency_us_sum " << sum << "\n";
  std::uint64_t cumulative = 0;
  for (std::size_t i = 0; i < kBucketCount; ++i) {
    cumulative += buckets_[i].load(std::memory_order_relaxed);
    if (i < std::size(kBucketBoundsUs)) {
      out << "gate_request_latency_us_bucket{le=\"" << kBucketBoundsUs[i] << "\"} " << cumulative
          << "\n";
    } else {
      out << "gate_request_latency_us_bucket{le=\"+Inf\"} " << cumulative << "\n";
    }
  }
  return out.str();
}

}  // namespace agentgate::gateway
