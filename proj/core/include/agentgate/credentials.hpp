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
#include <string>
#include <string_view>

#include "agentgate/encoding.hpp"

namespace agentgate::rbac {
struct PolicyStore;
}

namespace agentgate::auth {

inline constexpr std::string_view kCredentialScheme = "pbkdf2-hmac-sha256";
inline constexpr std::size_t kMinSaltBytes = 16;
inline constexpr std::uint32_t kMinIterations = 1000;
inline constexpr std::size_t kDigestBytes = 32;

// Salted, iterated password hash. Plaintext passwords are never stored.
struct CredentialRecord {
  std::string scheme{kCredentialScheme};
  enc::Bytes salt;
  std::uint32_t iterations = 0;
  enc::Bytes digest;

  bool operator==(const CredentialRecord&) const = default;
};

// Throws IntegrityError unless: scheme is the supported one, salt has at
// least kMinSaltBytes, iterations >= kMinIterations, digest is 32 bytes.
void validate(const CredentialRecord& cred);

CredentialRecord make_credential(std::string_view password, enc::Bytes salt,
                                 std::uint32_t iterations);
// Random 16-byte salt.
CredentialRecord make_credential(std::string_view password, std::uint32_t iterations);

// Re-derives and compares in constant time. Ignores account status.
bool verify_password(const CredentialRecord& cred, std::string_view password);

// True iff the user exists, the password matches, and the account is
// not blocked. Unknown users burn one derivation so that the timing of
// a rejection does not reveal whether the username exists.
bool verify_credentials(const rbac::PolicyStore& store, std::string_view username,
                        std::string_view password);

}  // namespace agentgate::auth
