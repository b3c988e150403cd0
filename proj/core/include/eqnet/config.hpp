#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace eqnet {

// Flat key-value experiment configuration. Lines are `key = value`,
// `#` starts a comment, whitespace is trimmed.
class Config {
public:
    Config() = default;

    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;

    // Comma list ("0.5,1,2") or inclusive integer range ("0:11").
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;
    std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;

    // Semicolon-separated int lists, e.g. "8,16,8,1; 6,12,24,12,6,1".
    std::vector<std::vector<int>> get_int_list_list(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

    // Canonical `key = value` text, sorted by key.
    std::string echo() const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace eqnet
