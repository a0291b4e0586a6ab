#include "mksim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "mksim/bytes.hpp"
#include "mksim/errors.hpp"

namespace mksim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_text(std::string_view text) {
  KeyValueConfig cfg;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    ++line_no;
    const std::size_t end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    start = end + 1;

    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (cfg.values_.contains(key))
      throw ConfigError("config: duplicate key '" + key + "'");
    cfg.values_.emplace(key, value);
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

void KeyValueConfig::set(std::string key, std::string value) {
  values_[std::move(key)] = std::move(value);
}

bool KeyValueConfig::has(std::string_view key) const {
  return values_.find(std::string(key)) != values_.end();
}

std::string KeyValueConfig::get_string(std::string_view key) const {
  const auto it = values_.find(std::string(key));
  if (it == values_.end()) throw ConfigError("config: missing key '" + std::string(key) + "'");
  return it->second;
}

std::uint64_t KeyValueConfig::get_u64(std::string_view key) const {
  const std::string raw = get_string(key);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc{} || ptr != raw.data() + raw.size())
    throw ConfigError("config: key '" + std::string(key) + "' is not an unsigned integer: " + raw);
  return v;
}

double KeyValueConfig::get_double(std::string_view key) const {
  const std::string raw = get_string(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + std::string(key) + "' is not a number: " + raw);
  }
}

bool KeyValueConfig::get_bool(std::string_view key) const {
  const std::string v = lower(get_string(key));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: key '" + std::string(key) + "' is not a boolean: " + v);
}

std::string KeyValueConfig::get_string_or(std::string_view key, std::string_view fallback) const {
  return has(key) ? get_string(key) : std::string(fallback);
}

std::uint64_t KeyValueConfig::get_u64_or(std::string_view key, std::uint64_t fallback) const {
  return has(key) ? get_u64(key) : fallback;
}

std::uint32_t KeyValueConfig::get_u32_or(std::string_view key, std::uint32_t fallback) const {
  if (!has(key)) return fallback;
  const std::uint64_t v = get_u64(key);
  if (v > std::numeric_limits<std::uint32_t>::max())
    throw ConfigError("config: key '" + std::string(key) + "' is out of range");
  return static_cast<std::uint32_t>(v);
}

double KeyValueConfig::get_double_or(std::string_view key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

bool KeyValueConfig::get_bool_or(std::string_view key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}

std::string KeyValueConfig::canonical_text() const {
  std::string out;
  for (const auto& [k, v] : values_) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

std::uint64_t KeyValueConfig::digest() const {
  const std::string text = canonical_text();
  return fnv1a64({reinterpret_cast<const unsigned char*>(text.data()), text.size()});
}

}  // namespace mksim
