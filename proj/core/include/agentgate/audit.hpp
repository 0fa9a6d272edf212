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
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace agentgate::audit {

// Request-terminal decision classes, plus two extra classes (Alert,
// Block) for records emitted by the automated security response; the
// latter never correspond to a request of their own.
enum class Decision { Permit, Deny, AuthFail, Blocked, Alert, Block };

inline constexpr Decision kRequestDecisions[] = {Decision::Permit, Decision::Deny,
                                                 Decision::AuthFail, Decision::Blocked};

bool is_request_decision(Decision d);

enum class Reason {
  Permitted,
  NoSuchRole,
  ActionNotGranted,
  ResourceNotGranted,
  UserBlocked,
  BadFormat,
  BadSignature,
  Expired,
  Revoked,
  MissingToken,
  UnknownUser,
  InvalidCredentials,
  BadCode,
  PendingExpired,
  PendingAlreadyUsed,
  NotAdmin,
  UnknownAgent,
  UnknownAction,
  IntegrityViolation,
  ThresholdAlert,
  ThresholdBlock,
};

const char* to_string(Decision d);
const char* to_string(Reason r);
std::optional<Decision> parse_decision(std::string_view s);
std::optional<Reason> parse_reason(std::string_view s);

// 64 hex zeros: the prev_hash of the first record.
extern const char kGenesisHash[65];

struct AuditRecord {
  std::uint64_t seq = 0;       // contiguous from 1
  std::int64_t timestamp = 0;  // unix microseconds
  std::string username;        // "anonymous" when no subject is known
  std::string action;
  std::string resource;
  Decision decision = Decision::Deny;
  Reason reason = Reason::Permitted;
  std::string mode;
  std::optional<std::string> token_id;
  std::int64_t latency_us = 0;
  std::string prev_hash;    // lowercase hex, 64 chars
  std::string record_hash;  // lowercase hex, 64 chars

  bool operator==(const AuditRecord&) const = default;
};

// Compact JSON object of every field except record_hash, keys in the
// fixed wire order (token_id omitted when absent). record_hash is the
// SHA-256 of these bytes.
std::string canonical_prefix(const AuditRecord& rec);

// One JSONL line (no trailing newline): canonical_prefix fields plus
// record_hash last.
std::string to_jsonl(const AuditRecord& rec);

// Strict inverse of to_jsonl: exact key order, exact types, lowercase
// 64-char hex hashes. Throws ParseError.
AuditRecord record_from_jsonl(std::string_view line);

struct RecordInput {
  std::int64_t timestamp = 0;
  std::string username;
  std::string action;
  std::string resource;
  Decision decision = Decision::Deny;
  Reason reason = Reason::Permitted;
  std::string mode;
  std::optional<std::string> token_id;
  std::int64_t latency_us = 0;
};

// Durable backend for the in-memory log. write returns false on
// failure; the log surfaces that in a counter instead of failing the
// request (weaker-than-atomic by design, documented).
class AuditSink {
 public:
  virtual ~AuditSink() = default;
  virtual bool write(const AuditRecord& rec, const std::string& jsonl_line) = 0;
};

class JsonlFileSink final : public AuditSink {
 public:
  explicit JsonlFileSink(const std::string& path);
  bool write(const AuditRecord& rec, const std::string& jsonl_line) override;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// Length-prefixed binary framing: u32 little-endian byte count, then
// that many bytes of the JSONL line.
class BinaryFileSink final : public AuditSink {
 public:
  explicit BinaryFileSink(const std::string& path);
  bool write(const AuditRecord& rec, const std::string& jsonl_line) override;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

struct AppendResult {
  std::uint64_t seq = 0;
  bool sink_ok = true;
};

// Append-only hash-chained log. Appends serialize through one mutex
// (total order); reads copy a consistent prefix.
class AuditLog {
 public:
  explicit AuditLog(std::unique_ptr<AuditSink> sink = nullptr);

  AppendResult append(const RecordInput& input);

  std::size_t size() const;
  std::vector<AuditRecord> records() const;
  std::uint64_t sink_failures() const;

  struct Filter {
    std::optional<std::string> username;
    std::optional<std::int64_t> from_micros;  // inclusive
    std::optional<std::int64_t> to_micros;    // inclusive
    std::optional<Decision> decision;
  };

  // Matching records in seq order; an empty filter returns everything.
  std::vector<AuditRecord> query(const Filter& filter) const;

 private:
  mutable std::mutex mu_;
  std::vector<AuditRecord> records_;
  std::unique_ptr<AuditSink> sink_;
  std::atomic<std::uint64_t> sink_failures_{0};
};

struct ChainVerdict {
  bool ok = true;
  std::uint64_t first_bad_seq = 0;  // meaningful iff !ok
  std::string detail;

  bool operator==(const ChainVerdict&) const = default;
};

// Recomputes every hash and checks seq contiguity and linkage.
ChainVerdict verify_chain(const std::vector<AuditRecord>& records);

enum class LogFormat { Jsonl, Binary };

std::vector<AuditRecord> read_log_file(const std::string& path, LogFormat format);

// File-level verification: a record that fails to parse at position k
// is reported as bad seq k (tampering counts even when it breaks the
// framing, not just the hashes).
ChainVerdict verify_log_file(const std::string& path, LogFormat format);

struct ThresholdConfig {
  std::int64_t window_seconds = 900;
  int alert_threshold = 3;
  int block_threshold = 10;

  void validate() const;  // 0 < alert <= block, window > 0
};

// Sliding-window unauthorized-attempt counter, one window per user.
// Only failures with timestamp strictly newer than now - W count.
class FailureCounter {
 public:
  // Records a failure and returns the windowed count including it.
  int record_failure(const std::string& username, std::int64_t now_micros,
                     std::int64_t window_seconds);
  int count(const std::string& username, std::int64_t now_micros,
            std::int64_t window_seconds) const;

 private:
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::deque<std::int64_t>> events_;
};

enum class SecurityAction { NoAction, Alert, Block };

const char* to_string(SecurityAction a);

// Pure classification: records the failure and maps the windowed count
// to a response level. Enforcement of Block (policy status flip, token
// revocation) is the caller's job; the gateway wires it up.
SecurityAction register_unauthorized(FailureCounter& counter, const std::string& username,
                                     std::int64_t now_micros, const ThresholdConfig& thresholds);

}  // namespace agentgate::audit
