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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "agentgate/encoding.hpp"

// Thin wrappers over OpenSSL libcrypto. Everything here is synchronous
// and thread-safe; no global state beyond what libcrypto manages itself.
namespace agentgate::crypto {

using Digest32 = std::array<std::uint8_t, 32>;

Digest32 sha256(const void* data, std::size_t len);
Digest32 sha256(std::string_view data);
std::string sha256_hex(std::string_view data);

Digest32 hmac_sha256(std::string_view key, std::string_view msg);

// 20-byte tag, required by the time-based one-time-code scheme.
std::array<std::uint8_t, 20> hmac_sha1(const enc::Bytes& key, const void* msg, std::size_t len);

enc::Bytes pbkdf2_hmac_sha256(std::string_view password, const enc::Bytes& salt,
                              std::uint32_t iterations, std::size_t dklen);

// Length-equal comparison without data-dependent branching.
bool constant_time_equal(const void* a, const void* b, std::size_t len);
bool constant_time_equal(const enc::Bytes& a, const enc::Bytes& b);
bool constant_time_equal(std::string_view a, std::string_view b);

enc::Bytes random_bytes(std::size_t n);

// 128-bit random identifier, hex encoded. Used for token ids and
// pending-login handles.
std::string random_id();

}  // namespace agentgate::crypto
