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

#include <doctest.h>

#include <random>
#include <string>

#include "agentgate/encoding.hpp"

using namespace agentgate;

namespace {

enc::Bytes bytes_of(std::string_view s) { return enc::Bytes(s.begin(), s.end()); }

std::string decoded_string(const enc::Bytes& b) { return std::string(b.begin(), b.end()); }

}  // namespace

TEST_SUITE("encoding") {

TEST_CASE("base64 matches the standard vectors") {
  // RFC 4648 section 10.
  CHECK(enc::base64_encode(std::string_view("")) == "");
  CHECK(enc::base64_encode(std::string_view("f")) == "Zg==");
  CHECK(enc::base64_encode(std::string_view("fo")) == "Zm8=");
  CHECK(enc::base64_encode(std::string_view("foo")) == "Zm9v");
  CHECK(enc::base64_encode(std::string_view("foob")) == "Zm9vYg==");
  CHECK(enc::base64_encode(std::string_view("fooba")) == "Zm9vYmE=");
  CHECK(enc::base64_encode(std::string_view("foobar")) == "Zm9vYmFy");
}

TEST_CASE("base64 decode inverts encode and rejects junk") {
  for (std::string_view s : {"", "f", "fo", "foo", "foob", "fooba", "foobar"}) {
    auto decoded = enc::base64_decode(enc::base64_encode(s));
    REQUIRE(decoded.has_value());
    CHECK(decoded_string(*decoded) == s);
  }
  CHECK_FALSE(enc::base64_decode("Zg=").has_value());    // bad padding length
  CHECK_FALSE(enc::base64_decode("Zg===").has_value());  // too much padding
  CHECK_FALSE(enc::base64_decode("Z!==").has_value());   // alphabet violation
  CHECK_FALSE(enc::base64_decode("Zg==Zg==x").has_value());
}

TEST_CASE("base64url omits padding and swaps the url-unsafe chars") {
  // 0xfb 0xff encodes to '+' '/' territory in standard base64.
  const enc::Bytes hot = {0xfb, 0xef, 0xff};
  const std::string url = enc::base64url_encode(hot);
  CHECK(url.find('+') == std::string::npos);
  CHECK(url.find('/') == std::string::npos);
  CHECK(url.find('=') == std::string::npos);
  CHECK(url == "--__");
  auto back = enc::base64url_decode(url);
  REQUIRE(back.has_value());
  CHECK(*back == hot);
}

TEST_CASE("base64url decode rejects the standard alphabet and padding") {
  CHECK_FALSE(enc::base64url_decode("+w").has_value());
  CHECK_FALSE(enc::base64url_decode("/w").has_value());
  CHECK_FALSE(enc::base64url_decode("Zg==").has_value());
}

TEST_CASE("base64url decode rejects non-canonical trailing bits") {
  // "Zh" and "Zg" both carry 0x66 in their first 8 bits; only "Zg" has
  // zero trailing bits. Token tamper detection relies on this.
  auto canonical = enc::base64url_decode("Zg");
  REQUIRE(canonical.has_value());
  CHECK((*canonical) == bytes_of("f"));
  CHECK_FALSE(enc::base64url_decode("Zh").has_value());
  CHECK(enc::base64url_decode("Zm9vYmF5").has_value());  // full groups are fine
}

TEST_CASE("base64 and base64url round-trip random buffers") {
  std::mt19937_64 rng(20260815);
  for (int iter = 0; iter < 200; ++iter) {
    enc::Bytes buf(rng() % 64);
    for (auto& b : buf) b = static_cast<std::uint8_t>(rng());
    auto std_back = enc::base64_decode(enc::base64_encode(buf));
    auto url_back = enc::base64url_decode(enc::base64url_encode(buf));
    REQUIRE(std_back.has_value());
    REQUIRE(url_back.has_value());
    CHECK(*std_back == buf);
    CHECK(*url_back == buf);
  }
}

TEST_CASE("base32 matches the standard vectors") {
  // RFC 4648 section 10.
  CHECK(enc::base32_encode(bytes_of("")) == "");
  CHECK(enc::base32_encode(bytes_of("f")) == "MY======");
  CHECK(enc::base32_encode(bytes_of("fo")) == "MZXQ====");
  CHECK(enc::base32_encode(bytes_of("foo")) == "MZXW6===");
  CHECK(enc::base32_encode(bytes_of("foob")) == "MZXW6YQ=");
  CHECK(enc::base32_encode(bytes_of("fooba")) == "MZXW6YTB");
  CHECK(enc::base32_encode(bytes_of("foobar")) == "MZXW6YTBOI======");
}

TEST_CASE("base32 handles authenticator secrets, case and padding") {
  const enc::Bytes ascii_secret = bytes_of("12345678901234567890");
  const std::string b32 = enc::base32_encode(ascii_secret);
  CHECK(b32 == "GEZDGNBVGY3TQOJQGEZDGNBVGY3TQOJQ");
  auto upper = enc::base32_decode(b32);
  auto lower = enc::base32_decode("gezdgnbvgy3tqojqgezdgnbvgy3tqojq");
  auto unpadded = enc::base32_decode("MZXW6");
  REQUIRE(upper.has_value());
  REQUIRE(lower.has_value());
  REQUIRE(unpadded.has_value());
  CHECK(*upper == ascii_secret);
  CHECK(*lower == ascii_secret);
  CHECK(decoded_string(*unpadded) == "foo");
  CHECK_FALSE(enc::base32_decode("MZXW0===").has_value());  // '0' not in alphabet
}

TEST_CASE("hex encodes lowercase and round-trips") {
  const enc::Bytes data = {0x00, 0xde, 0xad, 0xbe, 0xef, 0xff};
  CHECK(enc::hex_encode(data) == "00deadbeefff");
  auto back = enc::hex_decode("00deadbeefff");
  REQUIRE(back.has_value());
  CHECK(*back == data);
  auto upper = enc::hex_decode("DEADBEEF");
  REQUIRE(upper.has_value());
  CHECK(enc::hex_encode(*upper) == "deadbeef");
  CHECK_FALSE(enc::hex_decode("abc").has_value());   // odd length
  CHECK_FALSE(enc::hex_decode("zz").has_value());    // non-hex
}

}  // TEST_SUITE
