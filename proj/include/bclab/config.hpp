#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace bcl {

/// Flat key=value configuration: one `key = value` pair per line, `#`
/// comments, later assignments win. Typed getters record which keys were
/// consumed; finalize() rejects anything left over.
class KeyValueConfig {
  public:
    KeyValueConfig() = default;
    static KeyValueConfig from_file(const std::filesystem::path& path);
    static KeyValueConfig from_string(const std::string& text);

    /// Apply a `key=value` override (CLI --set).
    void set(const std::string& assignment);
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    /// Comma-separated list of doubles.
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

    /// Throws config_error when a present key was never consumed.
    void reject_unknown() const;

    const std::map<std::string, std::string>& entries() const { return entries_; }
    /// Canonical `key=value` lines, sorted; re-parseable.
    std::string canonical() const;

  private:
    std::map<std::string, std::string> entries_;
    mutable std::set<std::string> consumed_;
};

/// FNV-1a over the canonical serialization.
std::uint64_t config_hash(const KeyValueConfig& cfg);

}  // namespace bcl
