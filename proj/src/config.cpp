#include "javf/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "javf/errors.hpp"

namespace javf::cfg {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

// Strips a trailing comment, respecting quoted strings.
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

std::string where(const std::string& section, const std::string& key, const ConfigValue& v) {
    return "[" + section + "] " + key + " (line " + std::to_string(v.line) + ")";
}

std::string unquote(const std::string& raw, const std::string& ctx) {
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
        return raw.substr(1, raw.size() - 2);
    throw ConfigError(ctx + ": expected a quoted string, got '" + raw + "'");
}

double to_double(const std::string& raw, const std::string& ctx) {
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (raw.empty() || end != raw.c_str() + raw.size())
        throw ConfigError(ctx + ": expected a number, got '" + raw + "'");
    return v;
}

std::int64_t to_i64(const std::string& raw, const std::string& ctx) {
    char* end = nullptr;
    const std::int64_t v = std::strtoll(raw.c_str(), &end, 10);
    if (raw.empty() || end != raw.c_str() + raw.size())
        throw ConfigError(ctx + ": expected an integer, got '" + raw + "'");
    return v;
}

} // namespace

void ConfigTree::insert(const std::string& section, const std::string& key, ConfigValue v) {
    auto [it, fresh] = sections_[section].emplace(key, std::move(v));
    if (!fresh)
        throw ConfigError("[" + section + "] " + key + " set twice (line " +
                          std::to_string(v.line) + ")");
}

bool ConfigTree::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

const ConfigValue* ConfigTree::find(const std::string& section, const std::string& key) const {
    const auto sec = sections_.find(section);
    if (sec == sections_.end()) return nullptr;
    const auto it = sec->second.find(key);
    return it == sec->second.end() ? nullptr : &it->second;
}

const ConfigValue& ConfigTree::require(const std::string& section, const std::string& key) const {
    const ConfigValue* v = find(section, key);
    if (!v) throw ConfigError("[" + section + "] is missing required key '" + key + "'");
    return *v;
}

std::uint64_t ConfigTree::get_u64(const std::string& section, const std::string& key,
                                  std::uint64_t fallback) const {
    const ConfigValue* v = find(section, key);
    if (!v) return fallback;
    const std::int64_t n = to_i64(v->raw, where(section, key, *v));
    if (n < 0) throw ConfigError(where(section, key, *v) + ": must not be negative");
    return static_cast<std::uint64_t>(n);
}

std::int64_t ConfigTree::get_i64(const std::string& section, const std::string& key,
                                 std::int64_t fallback) const {
    const ConfigValue* v = find(section, key);
    return v ? to_i64(v->raw, where(section, key, *v)) : fallback;
}

double ConfigTree::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
    const ConfigValue* v = find(section, key);
    return v ? to_double(v->raw, where(section, key, *v)) : fallback;
}

bool ConfigTree::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
    const ConfigValue* v = find(section, key);
    if (!v) return fallback;
    if (v->raw == "true") return true;
    if (v->raw == "false") return false;
    throw ConfigError(where(section, key, *v) + ": expected true or false, got '" + v->raw + "'");
}

std::string ConfigTree::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
    const ConfigValue* v = find(section, key);
    return v ? unquote(v->raw, where(section, key, *v)) : fallback;
}

std::vector<double> ConfigTree::get_double_list(const std::string& section, const std::string& key,
                                                const std::vector<double>& fallback) const {
    const ConfigValue* v = find(section, key);
    if (!v) return fallback;
    if (!v->is_array) throw ConfigError(where(section, key, *v) + ": expected an array");
    std::vector<double> out;
    for (const auto& e : v->elements) out.push_back(to_double(e, where(section, key, *v)));
    return out;
}

std::vector<std::string> ConfigTree::get_string_list(
    const std::string& section, const std::string& key,
    const std::vector<std::string>& fallback) const {
    const ConfigValue* v = find(section, key);
    if (!v) return fallback;
    if (!v->is_array) throw ConfigError(where(section, key, *v) + ": expected an array");
    std::vector<std::string> out;
    for (const auto& e : v->elements) out.push_back(unquote(e, where(section, key, *v)));
    return out;
}

std::string ConfigTree::require_string(const std::string& section, const std::string& key) const {
    const ConfigValue& v = require(section, key);
    return unquote(v.raw, where(section, key, v));
}

void ConfigTree::reject_unknown(const std::string& section,
                                const std::vector<std::string>& known) const {
    const auto sec = sections_.find(section);
    if (sec == sections_.end()) return;
    for (const auto& [key, v] : sec->second) {
        bool ok = false;
        for (const auto& k : known) ok = ok || k == key;
        if (!ok)
            throw ConfigError("[" + section + "] has unknown key '" + key + "' (line " +
                              std::to_string(v.line) + ")");
    }
}

std::vector<std::string> ConfigTree::section_names() const {
    std::vector<std::string> names;
    for (const auto& [name, keys] : sections_) names.push_back(name);
    return names;
}

ConfigTree parse_config_text(const std::string& text, const std::string& origin) {
    ConfigTree tree;
    std::istringstream in(text);
    std::string line, section;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        line = trim(strip_comment(line));
        if (line.empty()) continue;

        const std::string ctx = origin + ":" + std::to_string(ln);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(ctx + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(ctx + ": empty section name");
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(ctx + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(ctx + ": empty key");
        if (value.empty()) throw ConfigError(ctx + ": empty value");
        if (section.empty()) throw ConfigError(ctx + ": key before any [section]");

        ConfigValue v;
        v.line = ln;
        if (value.front() == '[') {
            if (value.back() != ']') throw ConfigError(ctx + ": unterminated array");
            v.is_array = true;
            const std::string body = trim(value.substr(1, value.size() - 2));
            std::size_t start = 0;
            bool quoted = false;
            if (!body.empty()) {
                for (std::size_t i = 0; i <= body.size(); ++i) {
                    if (i < body.size() && body[i] == '"') quoted = !quoted;
                    if (i == body.size() || (body[i] == ',' && !quoted)) {
                        const std::string elem = trim(body.substr(start, i - start));
                        if (elem.empty()) throw ConfigError(ctx + ": empty array element");
                        v.elements.push_back(elem);
                        start = i + 1;
                    }
                }
            }
        }
        v.raw = std::move(value);
        tree.insert(section, key, std::move(v));
    }
    return tree;
}

ConfigTree parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed on " + path.string());
    return parse_config_text(ss.str(), path.string());
}

} // namespace javf::cfg
