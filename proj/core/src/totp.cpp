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

#include "agentgate/totp.hpp"

#include <stdexcept>

#include "agentgate/crypto.hpp"

namespace agentgate::auth {

std::string hotp(const enc::Bytes& secret, std::uint64_t counter, int digits) {
  if (secret.empty()) throw std::invalid_argument("hotp: empty secret");
  if (digits < 1 || digits > 9) throw std::invalid_argument("hotp: digits out of range");

  std::uint8_t msg[8];
  for (int i = 7; i >= 0; --i) {
    msg[i] = static_cast<std::uint8_t>(counter & 0xff);
    counter >>= 8;
  }
  const auto mac = crypto::hmac_sha1(secret, msg, sizeof(msg));
  const std::size_t offset = mac[19] & 0x0f;
  const std::uint32_t bin = (static_cast<std::uint32_t>(mac[offset] & 0x7f) << 24) |
                            (static_cast<std::uint32_t>(mac[offset + 1]) << 16) |
                            (static_cast<std::uint32_t>(mac[offset + 2]) << 8) |
                            static_cast<std::uint32_t>(mac[offset + 3]);
  std::uint32_t mod = 1;
  for (int i = 0; i < digits; ++i) mod *= 10;
  std::uint32_t value = bin % mod;

  std::string out(static_cast<std::size_t>(digits), '0');
  for (int i = digits - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<char>('0' + value % 10);
    value /= 10;
  }
  return out;
}

std::string totp_at(const enc::Bytes& secret, std::int64_t unix_seconds, int digits,
                    int step_seconds) {
  if (step_seconds <= 0) throw std::invalid_argument("totp: step must be positive");
  if (unix_seconds < 0) throw std::invalid_argument("totp: negative timestamp");
  const std::uint64_t counter =
      static_cast<std::uint64_t>(unix_seconds) / static_cast<std::uint64_t>(step_seconds);
  return hotp(secret, counter, digits);
}

bool verify_second_factor(const enc::Bytes& secret, std::string_view code,
                          std::int64_t now_seconds, int skew_steps, int digits,
                          int step_seconds) {
  if (skew_steps < 0) throw std::invalid_argument("totp: negative skew");
  if (code.size() != static_cast<std::size_t>(digits)) return false;
  const std::int64_t step = now_seconds / step_seconds;
  bool ok = false;
  for (std::int64_t s = step - skew_steps; s <= step + skew_steps; ++s) {
    if (s < 0) continue;
    const std::string candidate = hotp(secret, static_cast<std::uint64_t>(s), digits);
    // No early exit: every candidate in the window is checked.
    ok |= crypto::constant_time_equal(candidate, code);
  }
  return ok;
}

}  // namespace agentgate::auth
