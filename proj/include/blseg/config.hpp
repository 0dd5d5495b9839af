#ifndef BLSEG_CONFIG_HPP
#define BLSEG_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include "blseg/errors.hpp"

namespace blseg {

// Flat key-value text configs: one `key = value` per line, dotted keys,
// '#' starts a comment. Whitespace around keys and values is trimmed.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig from_file(const std::string& path);
    static KeyValueConfig from_string(const std::string& text);

    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }

    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;

    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;

    // comma-separated numbers, e.g. "64,64"
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

} // namespace blseg

#endif // BLSEG_CONFIG_HPP
