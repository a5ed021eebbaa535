#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace jpsn {

/// Flat key-value run configuration. Every known key always holds a value,
/// so the echo-back is the fully resolved configuration.
class RunConfig {
 public:
  RunConfig();

  /// Throws DomainError for an unknown key or a value of the wrong kind.
  void set(const std::string& key, const std::string& value);
  const std::string& get(const std::string& key) const;

  std::int64_t get_int(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  double get_double(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  /// Reads `key = value` lines ('#' starts a comment), or a JSON object whose
  /// "config" member (or the object itself) maps keys to scalars.
  void load_file(const std::string& path);
  void load_text(const std::string& text);

  /// Sorted by key.
  const std::map<std::string, std::string>& values() const noexcept { return values_; }
  static std::vector<std::string> known_keys();

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace jpsn
