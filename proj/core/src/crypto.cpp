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

#include "agentgate/crypto.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include <stdexcept>

namespace agentgate::crypto {

Digest32 sha256(const void* data, std::size_t len) {
  Digest32 out{};
  SHA256(static_cast<const unsigned char*>(data), len, out.data());
  return out;
}

Digest32 sha256(std::string_view data) { return sha256(data.data(), data.size()); }

std::string sha256_hex(std::string_view data) {
  const Digest32 d = sha256(data);
  return enc::hex_encode(d.data(), d.size());
}

Digest32 hmac_sha256(std::string_view key, std::string_view msg) {
  Digest32 out{};
  unsigned int out_len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
           reinterpret_cast<const unsigned char*>(msg.data()), msg.size(), out.data(),
           &out_len) == nullptr ||
      out_len != out.size()) {
    throw std::runtime_error("hmac-sha256 failed");
  }
  return out;
}

std::array<std::uint8_t, 20> hmac_sha1(const enc::Bytes& key, const void* msg, std::size_t len) {
  std::array<std::uint8_t, 20> out{};
  unsigned int out_len = 0;
  if (HMAC(EVP_sha1(), key.data(), static_cast<int>(key.size()),
           static_cast<const unsigned char*>(msg), len, out.data(), &out_len) == nullptr ||
      out_len != out.size()) {
    throw std::runtime_error("hmac-sha1 failed");
  }
  return out;
}

enc::Bytes pbkdf2_hmac_sha256(std::string_view password, const enc::Bytes& salt,
                              std::uint32_t iterations, std::size_t dklen) {
  enc::Bytes out(dklen);
  if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()), salt.data(),
                        static_cast<int>(salt.size()), static_cast<int>(iterations),
                        EVP_sha256(), static_cast<int>(dklen), out.data()) != 1) {
    throw std::runtime_error("pbkdf2 failed");
  }
  return out;
}

bool constant_time_equal(const void* a, const void* b, std::size_t len) {
  return CRYPTO_memcmp(a, b, len) == 0;
}

bool constant_time_equal(const enc::Bytes& a, const enc::Bytes& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  return constant_time_equal(a.data(), b.data(), a.size());
}

bool constant_time_equal(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  return constant_time_equal(a.data(), b.data(), a.size());
}

enc::Bytes random_bytes(std::size_t n) {
  enc::Bytes out(n);
  if (n > 0 && RAND_bytes(out.data(), static_cast<int>(n)) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
  return out;
}

std::string random_id() {
  const enc::Bytes b = random_bytes(16);
  return enc::hex_encode(b);
}

}  // namespace agentgate::crypto
