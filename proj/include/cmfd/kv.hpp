#ifndef CMFD_KV_HPP
#define CMFD_KV_HPP

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "cmfd/errors.hpp"

namespace cmfd {

/// Flat key-value document: one `key=value` per line, '#' starts a comment.
/// Keys keep insertion order so serialized output is stable.
class KeyValueDoc {
public:
    void set(std::string key, std::string value) {
        for (auto& [k, v] : entries_)
            if (k == key) {
                v = std::move(value);
                return;
            }
        entries_.emplace_back(std::move(key), std::move(value));
    }
    void set(std::string key, long long value) { set(std::move(key), std::to_string(value)); }
    void set(std::string key, int value) { set(std::move(key), static_cast<long long>(value)); }
    void set(std::string key, std::uint64_t value) { set(std::move(key), std::to_string(value)); }
    void set(std::string key, double value) { set(std::move(key), format_real(value)); }

    bool has(std::string_view key) const { return find(key) != nullptr; }

    const std::string& get(std::string_view key) const {
        if (const auto* v = find(key)) return *v;
        throw InvalidArgument("missing key '" + std::string(key) + "'");
    }

    template <typename T>
    T get_as(std::string_view key) const {
        return parse<T>(key, get(key));
    }

    template <typename T>
    T get_or(std::string_view key, T fallback) const {
        const auto* v = find(key);
        return v ? parse<T>(key, *v) : fallback;
    }

    const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

    std::string str() const {
        std::string out;
        for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
        return out;
    }

    static KeyValueDoc parse_text(std::string_view text) {
        KeyValueDoc doc;
        std::size_t line_no = 0;
        while (!text.empty()) {
            const auto nl = text.find('\n');
            std::string_view line = text.substr(0, nl);
            text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
            ++line_no;
            line = trim(line);
            if (line.empty() || line.front() == '#') continue;
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw InvalidArgument("line " + std::to_string(line_no) + ": expected key=value");
            doc.set(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
        }
        return doc;
    }

    static KeyValueDoc load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw InvalidArgument("cannot open " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_text(ss.str());
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw InvalidArgument("cannot write " + path);
        out << str();
    }

    /// Shortest round-trip decimal form of a double.
    static std::string format_real(double v) {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    }

private:
    static std::string_view trim(std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
        return s;
    }

    const std::string* find(std::string_view key) const {
        for (const auto& [k, v] : entries_)
            if (k == key) return &v;
        return nullptr;
    }

    template <typename T>
    static T parse(std::string_view key, const std::string& text) {
        if constexpr (std::is_same_v<T, std::string>) {
            return text;
        } else {
            T value{};
            const auto* end = text.data() + text.size();
            const auto res = std::from_chars(text.data(), end, value);
            if (res.ec != std::errc{} || res.ptr != end)
                throw InvalidArgument("key '" + std::string(key) + "': cannot parse '" + text + "'");
            return value;
        }
    }

    std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace cmfd

#endif  // CMFD_KV_HPP
