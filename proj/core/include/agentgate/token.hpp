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
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "agentgate/rbac.hpp"

namespace agentgate::auth {

struct TokenClaims {
  std::string sub;                        // username
  std::string role;                       // role at issuance
  std::vector<rbac::PermissionId> perms;  // grants at issuance; advisory only
  std::int64_t iat = 0;                   // unix seconds
  std::int64_t exp = 0;                   // unix seconds, strict: valid iff exp > now
  std::string jti;                        // unique token id

  bool operator==(const TokenClaims&) const = default;
};

// Compact signed token: base64url(header) "." base64url(payload) "."
// base64url(HMAC-SHA256(key, header "." payload)). The header is the
// fixed byte string {"alg":"HS256","typ":"JWT"} and the payload is a
// JSON object with keys in the fixed order exp, iat, jti, perms, role,
// sub (perms entries order action before resource). Signing the same
// claims with the same key is therefore byte-reproducible.
std::string issue_token(const TokenClaims& claims, std::string_view key);

enum class TokenError {
  None,
  BadFormat,     // not three dot-separated base64url segments / bad header / bad payload
  BadSignature,  // well-formed but MAC mismatch
  Expired,       // authentic but exp <= now
  Revoked,       // authentic, fresh, but jti revoked
};

const char* to_string(TokenError e);

struct TokenValidation {
  TokenError error = TokenError::BadFormat;
  // Present whenever the signature verified, including for Expired and
  // Revoked results, so callers can attribute the failure to a subject.
  std::optional<TokenClaims> claims;

  bool ok() const { return error == TokenError::None; }
};

// Insert-only set of revoked token ids.
class RevocationList {
 public:
  void revoke(const std::string& jti);
  bool is_revoked(const std::string& jti) const;
  std::size_t size() const;

 private:
  mutable std::shared_mutex mu_;
  std::unordered_set<std::string> revoked_;
};

// Checks run in a fixed order and report the first failure:
// format, signature, expiry, revocation.
TokenValidation validate_token(std::string_view token, std::string_view key,
                               std::int64_t now_seconds, const RevocationList& revoked);

}  // namespace agentgate::auth
