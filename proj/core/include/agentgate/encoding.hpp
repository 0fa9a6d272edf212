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
#include <string>
#include <string_view>
#include <vector>

namespace agentgate::enc {

using Bytes = std::vector<std::uint8_t>;

// Standard base64 (RFC 4648 section 4), '=' padded.
std::string base64_encode(const void* data, std::size_t len);
std::string base64_encode(const Bytes& data);
std::string base64_encode(std::string_view data);
std::optional<Bytes> base64_decode(std::string_view text);

// base64url (RFC 4648 section 5) without padding, as used in compact
// token serialization. Decoding rejects '+', '/' and '=' outright.
std::string base64url_encode(const void* data, std::size_t len);
std::string base64url_encode(const Bytes& data);
std::string base64url_encode(std::string_view data);
std::optional<Bytes> base64url_decode(std::string_view text);

// base32 (RFC 4648 section 6) for shared authenticator secrets.
// Decoding accepts lower case and optional '=' padding.
std::string base32_encode(const Bytes& data);
std::optional<Bytes> base32_decode(std::string_view text);

// Lower-case hex.
std::string hex_encode(const void* data, std::size_t len);
std::string hex_encode(const Bytes& data);
std::optional<Bytes> hex_decode(std::string_view text);

}  // namespace agentgate::enc
