#pragma once

#include <gmpxx.h>
#include <optional>
#include <stdexcept>
#include <string>

namespace ncdr {

using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

// Parses "p", "-p", or "p/q". Returns nullopt on malformed input.
inline std::optional<Rat> parse_rat(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::size_t i = 0;
    if (s[i] == '-' || s[i] == '+') ++i;
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    bool seen_slash = false;
    for (std::size_t j = i; j < s.size(); ++j) {
        if (s[j] == '/') {
            if (seen_slash || j + 1 >= s.size()) return std::nullopt;
            seen_slash = true;
        } else if (!std::isdigit(static_cast<unsigned char>(s[j]))) {
            return std::nullopt;
        }
    }
    Rat r;
    if (r.set_str(s, 10) != 0) return std::nullopt;
    if (seen_slash && sgn(r.get_den()) == 0) return std::nullopt;
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

// n! as an exact rational, for the diagonal degree operators.
inline Rat factorial(int n) {
    Rat r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

} // namespace ncdr
