/* Copyright 2026 The SBAM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SBAM_CONFIG_H_
#define SBAM_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "sbam/masking.h"

namespace sbam {

// Flat key=value configuration text.
//
//   line    := blank | comment | entry
//   comment := optional spaces, then '#' or ';', then anything
//   entry   := key '=' value
//
// Keys and values are trimmed of surrounding whitespace; '_' in keys is read
// as '-' so "delta_r" and "delta-r" name the same setting. A repeated key
// keeps its last value.
class KeyValueConfig {
 public:
  // Throws ConfigError naming source and line for a malformed line.
  static KeyValueConfig parse(std::string_view text,
                              std::string_view source = "<config>");
  // Throws IoError if the file cannot be read.
  static KeyValueConfig load(const std::filesystem::path& path);

  std::optional<std::string> get(std::string_view key) const;
  const std::map<std::string, std::string, std::less<>>& entries() const {
    return entries_;
  }
  const std::string& source() const { return source_; }

  // Typed getters; throw ConfigError naming the key on a malformed value.
  std::optional<double> get_double(std::string_view key) const;
  std::optional<std::uint64_t> get_u64(std::string_view key) const;
  std::optional<bool> get_bool(std::string_view key) const;

 private:
  std::string source_;
  std::map<std::string, std::string, std::less<>> entries_;
};

// Overlays the masking keys present in kv onto base:
//   strategy, ratio, delta-r, delta, noise, seed, invert-selection
// Missing keys keep base's values, so the defaults (delta-r 0.15, delta 0.1)
// come from MaskingConfig itself. The result is validated.
MaskingConfig masking_config_from(const KeyValueConfig& kv,
                                  MaskingConfig base = {});

}  // namespace sbam

#endif  // SBAM_CONFIG_H_
