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

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

namespace mvglo {

std::string_view version();

/// FNV-1a, used for the config hash printed in output headers.
std::uint64_t fnv1a64(std::string_view text);

/// Header comment row carried by every output file:
/// `# mvglo <version> config=<16 hex> seeds=<seeds>`.
std::string provenance_line(std::string_view config_text, std::string_view seeds);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

/// Writes to `<path>.tmp` and renames onto `path` on commit(). An
/// uncommitted file is removed on destruction, so readers never see a
/// partial output under the final name.
class AtomicOutput {
 public:
  explicit AtomicOutput(std::filesystem::path path);
  ~AtomicOutput();
  AtomicOutput(const AtomicOutput&) = delete;
  AtomicOutput& operator=(const AtomicOutput&) = delete;

  std::ofstream& stream() { return out_; }
  void commit();

 private:
  std::filesystem::path path_;
  std::filesystem::path tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

/// Drops `<target>.FAILED` holding `message`.
void write_failure_marker(const std::filesystem::path& target, std::string_view message);

}  // namespace mvglo
