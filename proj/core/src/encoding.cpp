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

#include "agentgate/encoding.hpp"

#include <array>

namespace agentgate::enc {
namespace {

constexpr char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
constexpr char kB64Url[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";
constexpr char kB32[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZ234567";

std::array<int, 256> make_rev(const char* alphabet, std::size_t n) {
  std::array<int, 256> rev{};
  rev.fill(-1);
  for (std::size_t i = 0; i < n; ++i) {
    rev[static_cast<unsigned char>(alphabet[i])] = static_cast<int>(i);
  }
  return rev;
}

const std::array<int, 256> kB64Rev = make_rev(kB64, 64);
const std::array<int, 256> kB64UrlRev = make_rev(kB64Url, 64);

std::string encode64(const std::uint8_t* p, std::size_t len, const char* alphabet, bool pad) {
  std::string out;
  out.reserve(((len + 2) / 3) * 4);
  std::size_t i = 0;
  for (; i + 3 <= len; i += 3) {
    std::uint32_t v = (p[i] << 16) | (p[i + 1] << 8) | p[i + 2];
    out.push_back(alphabet[(v >> 18) & 0x3f]);
    out.push_back(alphabet[(v >> 12) & 0x3f]);
    out.push_back(alphabet[(v >> 6) & 0x3f]);
    out.push_back(alphabet[v & 0x3f]);
  }
  const std::size_t rem = len - i;
  if (rem == 1) {
    std::uint32_t v = p[i] << 16;
    out.push_back(alphabet[(v >> 18) & 0x3f]);
    out.push_back(alphabet[(v >> 12) & 0x3f]);
    if (pad) out.append("==");
  } else if (rem == 2) {
    std::uint32_t v = (p[i] << 16) | (p[i + 1] << 8);
    out.push_back(alphabet[(v >> 18) & 0x3f]);
    out.push_back(alphabet[(v >> 12) & 0x3f]);
    out.push_back(alphabet[(v >> 6) & 0x3f]);
    if (pad) out.push_back('=');
  }
  return out;
}

std::optional<Bytes> decode64(std::string_view text, const std::array<int, 256>& rev,
                              bool allow_pad) {
  std::string_view body = text;
  if (allow_pad) {
    while (!body.empty() && body.back() == '=') body.remove_suffix(1);
    // Up to two padding chars, and the padded length must be a multiple of 4.
    const std::size_t stripped = text.size() - body.size();
    if (stripped > 2 || (stripped > 0 && text.size() % 4 != 0)) return std::nullopt;
  }
  const std::size_t rem = body.size() % 4;
  if (rem == 1) return std::nullopt;
  Bytes out;
  out.reserve((body.size() / 4) * 3 + 2);
  std::uint32_t acc = 0;
  int bits = 0;
  for (char c : body) {
    const int v = rev[static_cast<unsigned char>(c)];
    if (v < 0) return std::nullopt;
    acc = (acc << 6) | static_cast<std::uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xff));
    }
  }
  // Trailing bits must be zero, i.e. the text is canonical.
  if (bits > 0 && (acc & ((1u << bits) - 1)) != 0) return std::nullopt;
  return out;
}

}  // namespace

std::string base64_encode(const void* data, std::size_t len) {
  return encode64(static_cast<const std::uint8_t*>(data), len, kB64, true);
}
std::string base64_encode(const Bytes& data) { return base64_encode(data.data(), data.size()); }
std::string base64_encode(std::string_view data) {
  return base64_encode(data.data(), data.size());
}

std::optional<Bytes> base64_decode(std::string_view text) {
  return decode64(text, kB64Rev, true);
}

std::string base64url_encode(const void* data, std::size_t len) {
  return encode64(static_cast<const std::uint8_t*>(data), len, kB64Url, false);
}
std::string base64url_encode(const Bytes& data) {
  return base64url_encode(data.data(), data.size());
}
std::string base64url_encode(std::string_view data) {
  return base64url_encode(data.data(), data.size());
}

std::optional<Bytes> base64url_decode(std::string_view text) {
  if (text.find('=') != std::string_view::npos) return std::nullopt;
  return decode64(text, kB64UrlRev, false);
}

std::string base32_encode(const Bytes& data) {
  std::string out;
  out.reserve(((data.size() + 4) / 5) * 8);
  std::uint64_t acc = 0;
  int bits = 0;
  for (std::uint8_t b : data) {
    acc = (acc << 8) | b;
    bits += 8;
    while (bits >= 5) {
      bits -= 5;
      out.push_back(kB32[(acc >> bits) & 0x1f]);
    }
  }
  if (bits > 0) out.push_back(kB32[(acc << (5 - bits)) & 0x1f]);
  while (out.size() % 8 != 0) out.push_back('=');
  return out;
}

std::optional<Bytes> base32_decode(std::string_view text) {
  while (!text.empty() && text.back() == '=') text.remove_suffix(1);
  Bytes out;
  out.reserve((text.size() * 5) / 8 + 1);
  std::uint64_t acc = 0;
  int bits = 0;
  for (char c : text) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    const char* pos = nullptr;
    for (const char* q = kB32; *q; ++q) {
      if (*q == c) {
        pos = q;
        break;
      }
    }
    if (pos == nullptr) return std::nullopt;
    acc = (acc << 5) | static_cast<std::uint64_t>(pos - kB32);
    bits += 5;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xff));
    }
  }
  return out;
}

std::string hex_encode(const void* data, std::size_t len) {
  static const char* digits = "0123456789abcdef";
  const auto* p = static_cast<const std::uint8_t*>(data);
  std::string out;
  out.reserve(len * 2);
  for (std::size_t i = 0; i < len; ++i) {
    out.push_back(digits[p[i] >> 4]);
    out.push_back(digits[p[i] & 0xf]);
  }
  return out;
}
std::string hex_encode(const Bytes& data) { return hex_encode(data.data(), data.size()); }

std::optional<Bytes> hex_decode(std::string_view text) {
  if (text.size() % 2 != 0) return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Bytes out;
  out.reserve(text.size() / 2);
  for (std::size_t i = 0; i < text.size(); i += 2) {
    const int hi = nibble(text[i]);
    const int lo = nibble(text[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

}  // namespace agentgate::enc
