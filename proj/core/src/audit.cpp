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

#include "agentgate/audit.hpp"

#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentgate/crypto.hpp"
#include "agentgate/errors.hpp"

namespace agentgate::audit {

using ordered_json = nlohmann::ordered_json;

const char kGenesisHash[65] =
    "0000000000000000000000000000000000000000000000000000000000000000";

bool is_request_decision(Decision d) {
  return d == Decision::Permit || d == Decision::Deny || d == Decision::AuthFail ||
         d == Decision::Blocked;
}

const char* to_string(Decision d) {
  switch (d) {
    case Decision::Permit: return "Permit";
    case Decision::Deny: return "Deny";
    case Decision::AuthFail: return "AuthFail";
    case Decision::Blocked: return "Blocked";
    case Decision::Alert: return "Alert";
    case Decision::Block: return "Block";
  }
  return "unknown";
}

std::optional<Decision> parse_decision(std::string_view s) {
  if (s == "Permit") return Decision::Permit;
  if (s == "Deny") return Decision::Deny;
  if (s == "AuthFail") return Decision::AuthFail;
  if (s == "Blocked") return Decision::Blocked;
  if (s == "Alert") return Decision::Alert;
  if (s == "Block") return Decision::Block;
  return std::nullopt;
}

namespace {

struct ReasonName {
  Reason reason;
  const char* name;
};

constexpr ReasonName kReasonNames[] = {
    {Reason::Permitted, "permitted"},
    {Reason::NoSuchRole, "no_such_role"},
    {Reason::ActionNotGranted, "action_not_granted"},
    {Reason::ResourceNotGranted, "resource_not_granted"},
    {Reason::UserBlocked, "user_blocked"},
    {Reason::BadFormat, "bad_format"},
    {Reason::BadSignature, "bad_signature"},
    {Reason::Expired, "expired"},
    {Reason::Revoked, "revoked"},
    {Reason::MissingToken, "missing_token"},
    {Reason::UnknownUser, "unknown_user"},
    {Reason::InvalidCredentials, "invalid_credentials"},
    {Reason::BadCode, "bad_code"},
    {Reason::PendingExpired, "pending_expired"},
    {Reason::PendingAlreadyUsed, "pending_already_used"},
    {Reason::NotAdmin, "not_admin"},
    {Reason::UnknownAgent, "unknown_agent"},
    {Reason::UnknownAction, "unknown_action"},
    {Reason::IntegrityViolation, "integrity_violation"},
    {Reason::ThresholdAlert, "threshold_alert"},
    {Reason::ThresholdBlock, "threshold_block"},
};

}  // namespace

const char* to_string(Reason r) {
  for (const auto& entry : kReasonNames) {
    if (entry.reason == r) return entry.name;
  }
  return "unknown";
}

std::optional<Reason> parse_reason(std::string_view s) {
  for (const auto& entry : kReasonNames) {
    if (entry.name == s) return entry.reason;
  }
  return std::nullopt;
}

const char* to_string(SecurityAction a) {
  switch (a) {
    case SecurityAction::NoAction: return "no_action";
    case SecurityAction::Alert: return "alert";
    case SecurityAction::Block: return "block";
  }
  return "unknown";
}

namespace {

ordered_json prefix_json(const AuditRecord& rec) {
  ordered_json j;
  j["seq"] = rec.seq;
  j["timestamp"] = rec.timestamp;
  j["username"] = rec.username;
  j["action"] = rec.action;
  j["resource"] = rec.resource;
  j["decision"] = to_string(rec.decision);
  j["reason"] = to_string(rec.reason);
  j["mode"] = rec.mode;
  if (rec.token_id) j["token_id"] = *rec.token_id;
  j["latency_us"] = rec.latency_us;
  j["prev_hash"] = rec.prev_hash;
  return j;
}

}  // namespace

std::string canonical_prefix(const AuditRecord& rec) { return prefix_json(rec).dump(); }

std::string to_jsonl(const AuditRecord& rec) {
  ordered_json j = prefix_json(rec);
  j["record_hash"] = rec.record_hash;
  return j.dump();
}

namespace {

bool is_lower_hex_hash(const std::string& s) {
  if (s.size() != 64) return false;
  for (char c : s) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

}  // namespace

AuditRecord record_from_jsonl(std::string_view line) {
  const ordered_json j = ordered_json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ParseError("audit record: invalid JSON");

  std::vector<std::string> keys;
  for (const auto& [key, _] : j.items()) keys.push_back(key);
  const bool has_token = keys.size() == 12;
  static const std::vector<std::string> kWithToken = {
      "seq",  "timestamp", "username",   "action",    "resource",  "decision",
      "reason", "mode",    "token_id",   "latency_us", "prev_hash", "record_hash"};
  static const std::vector<std::string> kWithoutToken = {
      "seq",  "timestamp", "username",   "action",    "resource", "decision",
      "reason", "mode",    "latency_us", "prev_hash", "record_hash"};
  if (keys != (has_token ? kWithToken : kWithoutToken)) {
    throw ParseError("audit record: unexpected field set or order");
  }

  AuditRecord rec;
  if (!j["seq"].is_number_unsigned()) throw ParseError("audit record: bad seq");
  rec.seq = j["seq"].get<std::uint64_t>();
  if (!j["timestamp"].is_number_integer()) throw ParseError("audit record: bad timestamp");
  rec.timestamp = j["timestamp"].get<std::int64_t>();
  for (const char* key : {"username", "action", "resource", "mode"}) {
    if (!j[key].is_string()) throw ParseError(std::string("audit record: bad ") + key);
  }
  rec.username = j["username"].get<std::string>();
  rec.action = j["action"].get<std::string>();
  rec.resource = j["resource"].get<std::string>();
  rec.mode = j["mode"].get<std::string>();
  if (!j["decision"].is_string() || !j["reason"].is_string()) {
    throw ParseError("audit record: bad decision/reason");
  }
  const auto decision = parse_decision(j["decision"].get<std::string>());
  if (!decision) throw ParseError("audit record: unknown decision");
  rec.decision = *decision;
  const auto reason = parse_reason(j["reason"].get<std::string>());
  if (!reason) throw ParseError("audit record: unknown reason");
  rec.reason = *reason;
  if (has_token) {
    if (!j["token_id"].is_string()) throw ParseError("audit record: bad token_id");
    rec.token_id = j["token_id"].get<std::string>();
  }
  if (!j["latency_us"].is_number_integer()) throw ParseError("audit record: bad latency_us");
  rec.latency_us = j["latency_us"].get<std::int64_t>();
  for (const char* key : {"prev_hash", "record_hash"}) {
    if (!j[key].is_string()) throw ParseError(std::string("audit record: bad ") + key);
  }
  rec.prev_hash = j["prev_hash"].get<std::string>();
  rec.record_hash = j["record_hash"].get<std::string>();
  if (!is_lower_hex_hash(rec.prev_hash) || !is_lower_hex_hash(rec.record_hash)) {
    throw ParseError("audit record: hashes must be 64 chars of lowercase hex");
  }
  return rec;
}

struct JsonlFileSink::Impl {
  std::mutex mu;
  std::ofstream out;
};

JsonlFileSink::JsonlFileSink(const std::string& path) : impl_(std::make_shared<Impl>()) {
  impl_->out.open(path, std::ios::binary | std::ios::trunc);
}

bool JsonlFileSink::write(const AuditRecord&, const std::string& jsonl_line) {
  std::lock_guard lock(impl_->mu);
  if (!impl_->out.is_open()) return false;
  impl_->out << jsonl_line << '\n';
  impl_->out.flush();
  return impl_->out.good();
}

struct BinaryFileSink::Impl {
  std::mutex mu;
  std::ofstream out;
};

BinaryFileSink::BinaryFileSink(const std::string& path) : impl_(std::make_shared<Impl>()) {
  impl_->out.open(path, std::ios::binary | std::ios::trunc);
}

bool BinaryFileSink::write(const AuditRecord&, const std::string& jsonl_line) {
  std::lock_guard lock(impl_->mu);
  if (!impl_->out.is_open()) return false;
  const auto n = static_cast<std::uint32_t>(jsonl_line.size());
  const char frame[4] = {static_cast<char>(n & 0xff), static_cast<char>((n >> 8) & 0xff),
                         static_cast<char>((n >> 16) & 0xff),
                         static_cast<char>((n >> 24) & 0xff)};
  impl_->out.write(frame, sizeof(frame));
  impl_->out.write(jsonl_line.data(), static_cast<std::streamsize>(jsonl_line.size()));
  impl_->out.flush();
  return impl_->out.good();
}

AuditLog::AuditLog(std::unique_ptr<AuditSink> sink) : sink_(std::move(sink)) {}

AppendResult AuditLog::append(const RecordInput& input) {
  std::lock_guard lock(mu_);
  AuditRecord rec;
  rec.seq = records_.size() + 1;
  rec.timestamp = input.timestamp;
  rec.username = input.username;
  rec.action = input.action;
  rec.resource = input.resource;
  rec.decision = input.decision;
  rec.reason = input.reason;
  rec.mode = input.mode;
  rec.token_id = input.token_id;
  rec.latency_us = input.latency_us;
  rec.prev_hash = records_.empty() ? kGenesisHash : records_.back().record_hash;
  rec.record_hash = crypto::sha256_hex(canonical_prefix(rec));

  bool sink_ok = true;
  if (sink_) {
    sink_ok = sink_->write(rec, to_jsonl(rec));
    if (!sink_ok) sink_failures_.fetch_add(1);
  }
  records_.push_back(std::move(rec));
  return {records_.size(), sink_ok};
}

std::size_t AuditLog::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

std::vector<AuditRecord> AuditLog::records() const {
  std::lock_guard lock(mu_);
  return records_;
}

std::uint64_t AuditLog::sink_failures() const { return sink_failures_.load(); }

std::vector<AuditRecord> AuditLog::query(const Filter& filter) const {
  std::lock_guard lock(mu_);
  std::vector<AuditRecord> out;
  for (const auto& rec : records_) {
    if (filter.username && rec.username != *filter.username) continue;
    if (filter.from_micros && rec.timestamp < *filter.from_micros) continue;
    if (filter.to_micros && rec.timestamp > *filter.to_micros) continue;
    if (filter.decision && rec.decision != *filter.decision) continue;
    out.push_back(rec);
  }
  return out;
}

ChainVerdict verify_chain(const std::vector<AuditRecord>& records) {
  std::string prev = kGenesisHash;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const AuditRecord& rec = records[i];
    const std::uint64_t expect_seq = i + 1;
    if (rec.seq != expect_seq) {
      return {false, expect_seq, "seq is not contiguous"};
    }
    if (rec.prev_hash != prev) {
      return {false, rec.seq, "prev_hash does not match predecessor"};
    }
    if (crypto::sha256_hex(canonical_prefix(rec)) != rec.record_hash) {
      return {false, rec.seq, "record_hash mismatch"};
    }
    prev = rec.record_hash;
  }
  return {};
}

namespace {

std::vector<std::string> read_lines(const std::string& path, LogFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open audit log: " + path);
  std::vector<std::string> lines;
  if (format == LogFormat::Jsonl) {
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) lines.push_back(line);
    }
  } else {
    char frame[4];
    while (in.read(frame, sizeof(frame))) {
      const std::uint32_t n = static_cast<std::uint8_t>(frame[0]) |
                              (static_cast<std::uint32_t>(static_cast<std::uint8_t>(frame[1]))
                               << 8) |
                              (static_cast<std::uint32_t>(static_cast<std::uint8_t>(frame[2]))
                               << 16) |
                              (static_cast<std::uint32_t>(static_cast<std::uint8_t>(frame[3]))
                               << 24);
      if (n > (1u << 24)) throw ParseError("audit log: implausible frame length");
      std::string line(n, '\0');
      if (!in.read(line.data(), n)) throw ParseError("audit log: truncated frame");
      lines.push_back(std::move(line));
    }
  }
  return lines;
}

}  // namespace

std::vector<AuditRecord> read_log_file(const std::string& path, LogFormat format) {
  std::vector<AuditRecord> records;
  for (const auto& line : read_lines(path, format)) {
    records.push_back(record_from_jsonl(line));
  }
  return records;
}

ChainVerdict verify_log_file(const std::string& path, LogFormat format) {
  std::vector<AuditRecord> records;
  const auto lines = read_lines(path, format);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      records.push_back(record_from_jsonl(lines[i]));
    } catch (const ParseError& e) {
      return {false, i + 1, std::string("unparseable record: ") + e.what()};
    }
  }
  return verify_chain(records);
}

void ThresholdConfig::validate() const {
  if (window_seconds <= 0) throw IntegrityError("thresholds: window must be positive");
  if (alert_threshold <= 0) throw IntegrityError("thresholds: alert threshold must be positive");
  if (alert_threshold > block_threshold) {
    throw IntegrityError("thresholds: alert must not exceed block");
  }
}

int FailureCounter::record_failure(const std::string& username, std::int64_t now_micros,
                                   std::int64_t window_seconds) {
  std::lock_guard lock(mu_);
  auto& dq = events_[username];
  const std::int64_t cutoff = now_micros - window_seconds * 1000000;
  while (!dq.empty() && dq.front() <= cutoff) dq.pop_front();
  dq.push_back(now_micros);
  return static_cast<int>(dq.size());
}

int FailureCounter::count(const std::string& username, std::int64_t now_micros,
                          std::int64_t window_seconds) const {
  std::lock_guard lock(mu_);
  const auto it = events_.find(username);
  if (it == events_.end()) return 0;
  const std::int64_t cutoff = now_micros - window_seconds * 1000000;
  int n = 0;
  for (std::int64_t t : it->second) {
    if (t > cutoff) ++n;
  }
  return n;
}

SecurityAction register_unauthorized(FailureCounter& counter, const std::string& username,
                                     std::int64_t now_micros,
                                     const ThresholdConfig& thresholds) {
  thresholds.validate();
  const int n = counter.record_failure(username, now_micros, thresholds.window_seconds);
  if (n >= thresholds.block_threshold) return SecurityAction::Block;
  if (n >= thresholds.alert_threshold) return SecurityAction::Alert;
  return SecurityAction::NoAction;
}

}  // namespace agentgate::audit
