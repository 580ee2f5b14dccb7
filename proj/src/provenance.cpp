// Copyright 2026 The mvglo Authors
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

#include "mvglo/provenance.hpp"

#include <charconv>
#include <cstdio>
#include <system_error>

#include "mvglo/error.hpp"

namespace mvglo {

std::string_view version() { return MVGLO_VERSION_STRING; }

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string provenance_line(std::string_view config_text, std::string_view seeds) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(config_text)));
  std::string line = "# mvglo ";
  line += version();
  line += " config=";
  line += hash;
  line += " seeds=";
  line += seeds.empty() ? std::string_view("none") : seeds;
  return line;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    fail(ErrorCode::kFormat, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

AtomicOutput::AtomicOutput(std::filesystem::path path)
    : path_(std::move(path)), tmp_(path_.string() + ".tmp") {
  out_.open(tmp_, std::ios::binary | std::ios::trunc);
  if (!out_) fail(ErrorCode::kIo, "cannot open " + tmp_.string() + " for writing");
}

AtomicOutput::~AtomicOutput() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    std::filesystem::remove(tmp_, ec);
  }
}

void AtomicOutput::commit() {
  out_.flush();
  if (!out_) fail(ErrorCode::kIo, "write failed for " + tmp_.string());
  out_.close();
  std::error_code ec;
  std::filesystem::rename(tmp_, path_, ec);
  if (ec) fail(ErrorCode::kIo, "cannot rename onto " + path_.string() + ": " + ec.message());
  committed_ = true;
}

void write_failure_marker(const std::filesystem::path& target, std::string_view message) {
  std::ofstream out(target.string() + ".FAILED", std::ios::trunc);
  out << message << '\n';
}

}  // namespace mvglo
