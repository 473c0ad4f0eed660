#include "admfreq/keyvalue.hpp"

#include <fstream>
#include <sstream>

#include "admfreq/error.hpp"
#include "admfreq/format.hpp"

namespace admfreq {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

KeyValueFile KeyValueFile::parse(const std::string& text, const std::string& source) {
    KeyValueFile kv;
    kv.source_ = source;
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view s = raw;
        if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        auto eq = s.find('=');
        if (eq == std::string_view::npos) throw InputError(source, line, "expected 'key = value'");
        std::string key(trim(s.substr(0, eq)));
        std::string value(trim(s.substr(eq + 1)));
        if (key.empty()) throw InputError(source, line, "empty key");
        if (value.empty()) throw InputError(source, line, "empty value for key '" + key + "'");
        if (kv.entries_.count(key)) throw InputError(source, line, "duplicate key '" + key + "'");
        kv.entries_[key] = Entry{std::move(value), line};
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::string& path) { return parse(read_text_file(path), path); }

std::vector<std::string> KeyValueFile::keys() const {
    std::vector<std::string> out;
    for (const auto& [k, _] : entries_) out.push_back(k);
    return out;
}

std::size_t KeyValueFile::line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
}

void KeyValueFile::fail(const std::string& key, const std::string& what) const {
    auto line = line_of(key);
    if (line == 0) throw InputError(source_ + ": " + what);
    throw InputError(source_, line, what);
}

std::optional<std::string> KeyValueFile::text(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.value;
}

std::optional<double> KeyValueFile::number(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    try {
        return parse_double(it->second.value);
    } catch (const InputError& e) {
        fail(key, "key '" + key + "': " + e.what());
    }
}

std::optional<long long> KeyValueFile::integer(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    try {
        return parse_int(it->second.value);
    } catch (const InputError& e) {
        fail(key, "key '" + key + "': " + e.what());
    }
}

double KeyValueFile::required_number(const std::string& key) const {
    auto v = number(key);
    if (!v) throw InputError(source_ + ": missing required key '" + key + "'");
    return *v;
}

}  // namespace admfreq
