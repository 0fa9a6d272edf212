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

namespace agentgate::auth {

inline constexpr int kTotpStepSeconds = 30;
inline constexpr int kTotpDigits = 6;

// Counter-based one-time code: HMAC-SHA1 over the big-endian counter,
// dynamic truncation, modulo 10^digits, zero padded.
// Pre: secret non-empty, 1 <= digits <= 9.
std::string hotp(const enc::Bytes& secret, std::uint64_t counter, int digits);

// Time-based code for the step containing unix_seconds.
std::string totp_at(const enc::Bytes& secret, std::int64_t unix_seconds,
                    int digits = kTotpDigits, int step_seconds = kTotpStepSeconds);

// Accepts the code for the current step or any step within
// +/- skew_steps. Comparison is constant time per candidate.
bool verify_second_factor(const enc::Bytes& secret, std::string_view code,
                          std::int64_t now_seconds, int skew_steps,
                          int digits = kTotpDigits, int step_seconds = kTotpStepSeconds);

}  // namespace agentgate::auth
