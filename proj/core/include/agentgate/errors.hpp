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

#include <stdexcept>
#include <string>

namespace agentgate {

// Malformed external input: unparseable JSON, unknown keys, wrong types.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid input that violates a domain invariant (dangling
// role reference, duplicate id, out-of-range parameter, ...).
class IntegrityError : public std::runtime_error {
 public:
  explicit IntegrityError(const std::string& what) : std::runtime_error(what) {}
};

class NoSuchUserError : public IntegrityError {
 public:
  explicit NoSuchUserError(const std::string& username)
      : IntegrityError("no such user: " + username) {}
};

class NoSuchRoleError : public IntegrityError {
 public:
  explicit NoSuchRoleError(const std::string& role)
      : IntegrityError("no such role: " + role) {}
};

}  // namespace agentgate
