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

#include "agentgate/token.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "agentgate/crypto.hpp"

namespace agentgate::auth {

using nlohmann::json;

namespace {

constexpr std::string_view kHeaderJson = R"({"alg":"HS256","typ":"JWT"})";

std::string encode_payload(const TokenClaims& claims) {
  // nlohmann::json orders object keys lexicographically, which is
  // exactly the wire order (exp, iat, jti, perms, role, sub).
  json payload;
  payload["exp"] = claims.exp;
  payload["iat"] = claims.iat;
  payload["jti"] = claims.jti;
  json perms = json::array();
  for (const auto& perm : claims.perms) {
    perms.push_back({{"action", perm.action}, {"resource", perm.resource}});
  }
  payload["perms"] = std::move(perms);
  payload["role"] = claims.role;
  payload["sub"] = claims.sub;
  return payload.dump();
}

bool parse_payload(const enc::Bytes& bytes, TokenClaims& out) {
  const json payload = json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (payload.is_discarded() || !payload.is_object()) return false;
  if (!payload.contains("sub") || !payload["sub"].is_string()) return false;
  if (!payload.contains("role") || !payload["role"].is_string()) return false;
  if (!payload.contains("jti") || !payload["jti"].is_string()) return false;
  if (!payload.contains("iat") || !payload["iat"].is_number_integer()) return false;
  if (!payload.contains("exp") || !payload["exp"].is_number_integer()) return false;
  if (!payload.contains("perms") || !payload["perms"].is_array()) return false;
  out.sub = payload["sub"].get<std::string>();
  out.role = payload["role"].get<std::string>();
  out.jti = payload["jti"].get<std::string>();
  out.iat = payload["iat"].get<std::int64_t>();
  out.exp = payload["exp"].get<std::int64_t>();
  out.perms.clear();
  for (const auto& jp : payload["perms"]) {
    if (!jp.is_object() || !jp.contains("action") || !jp.contains("resource") ||
        !jp["action"].is_string() || !jp["resource"].is_string()) {
      return false;
    }
    out.perms.push_back({jp["action"].get<std::string>(), jp["resource"].get<std::string>()});
  }
  return true;
}

}  // namespace

std::string issue_token(const TokenClaims& claims, std::string_view key) {
  if (claims.jti.empty()) throw std::invalid_argument("token: empty jti");
  if (claims.exp <= claims.iat) throw std::invalid_argument("token: exp must exceed iat");
  if (key.empty()) throw std::invalid_argument("token: empty signing key");

  std::string signing_input = enc::base64url_encode(kHeaderJson);
  signing_input.push_back('.');
  signing_input += enc::base64url_encode(encode_payload(claims));
  const crypto::Digest32 mac = crypto::hmac_sha256(key, signing_input);
  signing_input.push_back('.');
  signing_input += enc::base64url_encode(mac.data(), mac.size());
  return signing_input;
}

const char* to_string(TokenError e) {
  switch (e) {
    case TokenError::None: return "none";
    case TokenError::BadFormat: return "bad_format";
    case TokenError::BadSignature: return "bad_signature";
    case TokenError::Expired: return "expired";
    case TokenError::Revoked: return "revoked";
  }
  return "unknown";
}

void RevocationList::revoke(const std::string& jti) {
  std::unique_lock lock(mu_);
  revoked_.insert(jti);
}

bool RevocationList::is_revoked(const std::string& jti) const {
  std::shared_lock lock(mu_);
  return revoked_.contains(jti);
}

std::size_t RevocationList::size() const {
  std::shared_lock lock(mu_);
  return revoked_.size();
}

TokenValidation validate_token(std::string_view token, std::string_view key,
                               std::int64_t now_seconds, const RevocationList& revoked) {
  TokenValidation result;

  const std::size_t dot1 = token.find('.');
  if (dot1 == std::string_view::npos) return result;
  const std::size_t dot2 = token.find('.', dot1 + 1);
  if (dot2 == std::string_view::npos || token.find('.', dot2 + 1) != std::string_view::npos) {
    return result;
  }
  const std::string_view header_b64 = token.substr(0, dot1);
  const std::string_view payload_b64 = token.substr(dot1 + 1, dot2 - dot1 - 1);
  const std::string_view sig_b64 = token.substr(dot2 + 1);

  const auto header = enc::base64url_decode(header_b64);
  const auto payload = enc::base64url_decode(payload_b64);
  const auto sig = enc::base64url_decode(sig_b64);
  if (!header || !payload || !sig) return result;
  if (std::string_view(reinterpret_cast<const char*>(header->data()), header->size()) !=
      kHeaderJson) {
    return result;
  }

  const crypto::Digest32 mac =
      crypto::hmac_sha256(key, token.substr(0, dot2));
  if (sig->size() != mac.size() ||
      !crypto::constant_time_equal(sig->data(), mac.data(), mac.size())) {
    result.error = TokenError::BadSignature;
    return result;
  }

  TokenClaims claims;
  if (!parse_payload(*payload, claims)) {
    result.error = TokenError::BadFormat;
    return result;
  }
  result.claims = std::move(claims);

  if (result.claims->exp <= now_seconds) {
    result.error = TokenError::Expired;
    return result;
  }
  if (revoked.is_revoked(result.claims->jti)) {
    result.error = TokenError::Revoked;
    return result;
  }
  result.error = TokenError::None;
  return result;
}

}  // namespace agentgate::auth
