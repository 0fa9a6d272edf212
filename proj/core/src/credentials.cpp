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

#include "agentgate/credentials.hpp"

#include "agentgate/crypto.hpp"
#include "agentgate/errors.hpp"
#include "agentgate/rbac.hpp"

namespace agentgate::auth {

void validate(const CredentialRecord& cred) {
  if (cred.scheme != kCredentialScheme) {
    throw IntegrityError("unsupported credential scheme: " + cred.scheme);
  }
  if (cred.salt.size() < kMinSaltBytes) throw IntegrityError("credential salt too short");
  if (cred.iterations < kMinIterations) throw IntegrityError("credential iterations too low");
  if (cred.digest.size() != kDigestBytes) throw IntegrityError("credential digest size mismatch");
}

CredentialRecord make_credential(std::string_view password, enc::Bytes salt,
                                 std::uint32_t iterations) {
  CredentialRecord cred;
  cred.salt = std::move(salt);
  cred.iterations = iterations;
  cred.digest = crypto::pbkdf2_hmac_sha256(password, cred.salt, iterations, kDigestBytes);
  validate(cred);
  return cred;
}

CredentialRecord make_credential(std::string_view password, std::uint32_t iterations) {
  return make_credential(password, crypto::random_bytes(kMinSaltBytes), iterations);
}

bool verify_password(const CredentialRecord& cred, std::string_view password) {
  const enc::Bytes derived =
      crypto::pbkdf2_hmac_sha256(password, cred.salt, cred.iterations, cred.digest.size());
  return crypto::constant_time_equal(derived, cred.digest);
}

bool verify_credentials(const rbac::PolicyStore& store, std::string_view username,
                        std::string_view password) {
  const auto it = store.users.find(std::string(username));
  if (it == store.users.end()) {
    // Same work as the found path, compared against an impossible digest.
    static const CredentialRecord decoy =
        make_credential("decoy", enc::Bytes(kMinSaltBytes, 0x5a), kMinIterations);
    verify_password(decoy, password);
    return false;
  }
  if (!verify_password(it->second.credential, password)) return false;
  return it->second.status == rbac::UserStatus::Active;
}

}  // namespace agentgate::auth
