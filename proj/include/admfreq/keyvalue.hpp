#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace admfreq {

/// Parsed `key = value` text. '#' starts a comment; blank lines are skipped.
class KeyValueFile {
public:
    struct Entry {
        std::string value;
        std::size_t line = 0;
    };

    static KeyValueFile parse(const std::string& text, const std::string& source);
    static KeyValueFile load(const std::string& path);

    const std::string& source() const { return source_; }
    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    std::vector<std::string> keys() const;

    // Typed accessors; errors name the key and carry its line number.
    std::optional<std::string> text(const std::string& key) const;
    std::optional<double> number(const std::string& key) const;
    std::optional<long long> integer(const std::string& key) const;
    double required_number(const std::string& key) const;
    std::size_t line_of(const std::string& key) const;

    [[noreturn]] void fail(const std::string& key, const std::string& what) const;

private:
    std::string source_;
    std::map<std::string, Entry> entries_;
};

std::string read_text_file(const std::string& path);

}  // namespace admfreq
