#pragma once

#include <istream>
#include <map>
#include <string>

namespace addmc {

using KeyValues = std::map<std::string, std::string>;

/// Flat `key = value` text. Blank lines and lines starting with '#' are skipped.
KeyValues read_key_values(std::istream& in);
KeyValues read_key_values_file(const std::string& path);

/// Numeric lookup; throws ConfigError naming the key when missing or malformed.
double get_double(const KeyValues& kv, const std::string& key);
double get_double(const KeyValues& kv, const std::string& key, double fallback);

}  // namespace addmc
