#include "bclab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "bclab/errors.hpp"

namespace bcl {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

KeyValueConfig KeyValueConfig::from_string(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) + ": expected key=value");
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

void KeyValueConfig::set(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw config_error("override must be key=value: " + assignment);
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    if (key.empty()) throw config_error("empty config key");
    entries_[key] = value;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    consumed_.insert(key);
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    consumed_.insert(key);
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw config_error("config key '" + key + "': not a number: " + it->second);
    }
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
    const double v = get_double(key, static_cast<double>(fallback));
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw config_error("config key '" + key + "': not an integer");
    return i;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    consumed_.insert(key);
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::uint64_t v = 0;
    const auto* first = it->second.data();
    const auto* last = first + it->second.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        throw config_error("config key '" + key + "': not an unsigned integer");
    return v;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    consumed_.insert(key);
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw config_error("config key '" + key + "': not a boolean: " + v);
}

std::vector<double> KeyValueConfig::get_list(const std::string& key,
                                             const std::vector<double>& fallback) const {
    consumed_.insert(key);
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::vector<double> out;
    std::istringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw config_error("config key '" + key + "': bad list item: " + item);
        }
    }
    if (out.empty()) throw config_error("config key '" + key + "': empty list");
    return out;
}

void KeyValueConfig::reject_unknown() const {
    for (const auto& [k, v] : entries_)
        if (consumed_.count(k) == 0) throw config_error("unknown config key: " + k);
}

std::string KeyValueConfig::canonical() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k;
        out += "=";
        out += v;
        out += "\n";
    }
    return out;
}

std::uint64_t config_hash(const KeyValueConfig& cfg) {
    const std::string s = cfg.canonical();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace bcl
