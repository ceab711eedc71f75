#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

namespace econet {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

// Splits on a separator without any quoting rules; the canonical file formats
// forbid separators inside fields.
inline std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

inline bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

inline bool parse_int(std::string_view s, int& out) {
    s = trim(s);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

// Fixed-decimal formatting with `sig` significant digits, no exponent
// notation, trailing zeros trimmed. Every CSV writer goes through this so
// reports are byte-stable across runs.
inline std::string format_sig(double v, int sig = 6) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    if (sig < 1) sig = 1;

    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", sig - 1, v);
    std::string_view s(buf);
    bool neg = false;
    if (s.front() == '-') {
        neg = true;
        s.remove_prefix(1);
    }
    auto epos = s.find('e');
    int exp10 = std::atoi(s.data() + epos + 1);
    std::string digits;
    for (char c : s.substr(0, epos))
        if (c != '.') digits.push_back(c);

    std::string out;
    if (exp10 >= static_cast<int>(digits.size()) - 1) {
        out = digits + std::string(exp10 - digits.size() + 1, '0');
    } else if (exp10 >= 0) {
        out = digits.substr(0, exp10 + 1) + "." + digits.substr(exp10 + 1);
    } else {
        out = "0." + std::string(-exp10 - 1, '0') + digits;
    }
    if (out.find('.') != std::string::npos) {
        while (out.back() == '0') out.pop_back();
        if (out.back() == '.') out.pop_back();
    }
    if (neg && out != "0") out.insert(out.begin(), '-');
    return out;
}

}  // namespace econet
