#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace javf::cfg {

// Minimal TOML-style config reader: `[section]` headers, `key = value`
// lines, `#` comments. Values are bare numbers, booleans, double-quoted
// strings, or flat arrays of those. Values keep their source text and parse
// on access so error messages can carry section, key and line.
struct ConfigValue {
    std::string raw;
    std::vector<std::string> elements; // set when the value was an array
    bool is_array = false;
    int line = 0;
};

class ConfigTree {
  public:
    void insert(const std::string& section, const std::string& key, ConfigValue v);

    bool has(const std::string& section, const std::string& key) const;
    const ConfigValue* find(const std::string& section, const std::string& key) const;

    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;
    std::int64_t get_i64(const std::string& section, const std::string& key,
                         std::int64_t fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    std::vector<double> get_double_list(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const;
    std::vector<std::string> get_string_list(const std::string& section, const std::string& key,
                                             const std::vector<std::string>& fallback) const;

    std::string require_string(const std::string& section, const std::string& key) const;

    // Keys never read back are usually typos; callers list what they accept
    // and everything else is rejected.
    void reject_unknown(const std::string& section, const std::vector<std::string>& known) const;
    std::vector<std::string> section_names() const;

  private:
    std::map<std::string, std::map<std::string, ConfigValue>> sections_;
    const ConfigValue& require(const std::string& section, const std::string& key) const;
};

ConfigTree parse_config_text(const std::string& text, const std::string& origin);
ConfigTree parse_config_file(const std::filesystem::path& path);

} // namespace javf::cfg
