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

#include "agentgate/pending.hpp"

#include <stdexcept>

#include "agentgate/crypto.hpp"

namespace agentgate::auth {

PendingTokenStore::PendingTokenStore(std::int64_t window_seconds)
    : window_micros_(window_seconds * 1000000) {
  if (window_seconds <= 0) throw std::invalid_argument("pending: window must be positive");
}

std::string PendingTokenStore::issue(const std::string& username, std::int64_t now_micros) {
  std::lock_guard lock(mu_);
  // Bound memory: entries a full window past their deadline are dropped.
  // Recently expired ones are kept so their callers still get the
  // expired answer rather than unknown.
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (now_micros >= it->second.deadline_micros + window_micros_) {
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
  std::string handle = crypto::random_id();
  entries_.emplace(handle, Entry{username, now_micros + window_micros_, false});
  return handle;
}

PendingTokenStore::Status PendingTokenStore::classify(const Entry& e,
                                                      std::int64_t now_micros) const {
  if (e.used) return Status::AlreadyUsed;
  if (now_micros >= e.deadline_micros) return Status::Expired;
  return Status::Ok;
}

PendingTokenStore::Lookup PendingTokenStore::peek(const std::string& handle,
                                                  std::int64_t now_micros) const {
  std::lock_guard lock(mu_);
  const auto it = entries_.find(handle);
  if (it == entries_.end()) return {};
  return {classify(it->second, now_micros), it->second.username};
}

PendingTokenStore::Status PendingTokenStore::consume(const std::string& handle,
                                                     std::int64_t now_micros) {
  std::lock_guard lock(mu_);
  const auto it = entries_.find(handle);
  if (it == entries_.end()) return Status::Unknown;
  const Status status = classify(it->second, now_micros);
  if (status == Status::Ok) it->second.used = true;
  return status;
}

std::size_t PendingTokenStore::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

}  // namespace agentgate::auth
