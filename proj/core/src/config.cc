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

#include "sbam/config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "sbam/errors.h"

namespace sbam {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string canonical_key(std::string_view key) {
  std::string out(key);
  std::replace(out.begin(), out.end(), '_', '-');
  return out;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text,
                                     std::string_view source) {
  KeyValueConfig cfg;
  cfg.source_ = std::string(source);
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    const auto eq = line.find('=');
    const std::string_view key = eq == std::string_view::npos
                                     ? std::string_view{}
                                     : trim(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigError(cfg.source_ + ":" + std::to_string(line_no) +
                        ": expected key=value, got '" + std::string(line) + "'");
    }
    cfg.entries_[canonical_key(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
  const auto it = entries_.find(canonical_key(key));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> KeyValueConfig::get_double(std::string_view key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) {
    throw ConfigError(source_ + ": key '" + std::string(key) +
                      "' expects a number, got '" + *v + "'");
  }
  return out;
}

std::optional<std::uint64_t> KeyValueConfig::get_u64(std::string_view key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) {
    throw ConfigError(source_ + ": key '" + std::string(key) +
                      "' expects a non-negative integer, got '" + *v + "'");
  }
  return out;
}

std::optional<bool> KeyValueConfig::get_bool(std::string_view key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw ConfigError(source_ + ": key '" + std::string(key) +
                    "' expects true/false, got '" + *v + "'");
}

MaskingConfig masking_config_from(const KeyValueConfig& kv, MaskingConfig base) {
  if (const auto s = kv.get("strategy")) base.strategy = parse_strategy(*s);
  if (const auto v = kv.get_double("ratio")) base.base_ratio = *v;
  if (const auto v = kv.get_double("delta-r")) base.delta_r = *v;
  if (const auto v = kv.get_double("delta")) base.delta = *v;
  if (const auto v = kv.get_double("noise")) base.noise_amplitude = static_cast<float>(*v);
  if (const auto v = kv.get_u64("seed")) base.seed = *v;
  if (const auto v = kv.get_bool("invert-selection")) base.invert_selection = *v;
  base.validate();
  return base;
}

}  // namespace sbam
