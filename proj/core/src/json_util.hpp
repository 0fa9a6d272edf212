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

// Internal helpers for strict JSON config parsing: every object is
// checked against an explicit key list so typos fail loudly instead of
// being ignored.

#pragma once

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "agentgate/errors.hpp"

namespace agentgate::jsonutil {

inline void require_keys(const nlohmann::json& obj, std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional, const char* what) {
  if (!obj.is_object()) throw ParseError(std::string(what) + ": expected an object");
  for (const char* key : required) {
    if (!obj.contains(key)) {
      throw ParseError(std::string(what) + ": missing key '" + key + "'");
    }
  }
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* k : required) known = known || key == k;
    for (const char* k : optional) known = known || key == k;
    if (!known) throw ParseError(std::string(what) + ": unknown key '" + key + "'");
  }
}

inline std::string get_string(const nlohmann::json& obj, const char* key, const char* what) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ParseError(std::string(what) + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

inline double get_number(const nlohmann::json& v, const char* what) {
  if (!v.is_number()) throw ParseError(std::string(what) + ": expected a number");
  return v.get<double>();
}

inline nlohmann::json parse_or_throw(std::string_view text, const char* what) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ParseError(std::string(what) + ": invalid JSON");
  return doc;
}

inline std::string read_file_or_throw(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(std::string(what) + ": cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace agentgate::jsonutil
