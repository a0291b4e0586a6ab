#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace mksim {

// Flat `key = value` configuration. Lines starting with '#' (and blank lines)
// are ignored; inline `# ...` trailers are stripped. Keys are unique.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse_text(std::string_view text);
  static KeyValueConfig load_file(const std::filesystem::path& path);

  void set(std::string key, std::string value);
  bool has(std::string_view key) const;

  std::string get_string(std::string_view key) const;
  std::uint64_t get_u64(std::string_view key) const;
  double get_double(std::string_view key) const;
  bool get_bool(std::string_view key) const;  // true/false/1/0/yes/no/on/off

  std::string get_string_or(std::string_view key, std::string_view fallback) const;
  std::uint64_t get_u64_or(std::string_view key, std::uint64_t fallback) const;
  std::uint32_t get_u32_or(std::string_view key, std::uint32_t fallback) const;
  double get_double_or(std::string_view key, double fallback) const;
  bool get_bool_or(std::string_view key, bool fallback) const;

  // FNV-1a over the canonical "key=value\n" rendering (keys sorted), so any
  // result table can be traced back to its exact inputs.
  std::uint64_t digest() const;
  std::string canonical_text() const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace mksim
