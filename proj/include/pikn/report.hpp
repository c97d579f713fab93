#pragma once

// Locale-independent number formatting and small CSV helpers shared by the
// report emitters.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pikn {

/// Ratios and diagnostics are reported with this many decimals.
inline constexpr int kRatioDecimals = 6;

/// Fixed-point text for a double, never locale dependent.
inline std::string format_fixed(double value, int decimals = kRatioDecimals) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
    return std::string(buf, res.ptr);
}

/// value rounded to `decimals` places, for JSON numbers.
inline double round_to(double value, int decimals = kRatioDecimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(value * scale) / scale;
}

inline std::string csv_field(const std::optional<std::uint64_t>& v) {
    return v ? std::to_string(*v) : std::string{};
}

/// Space-separated list, "-" when empty.
inline std::string join_list(const std::vector<std::uint64_t>& xs, char sep = ' ') {
    if (xs.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(xs[i]);
    }
    return out;
}

}  // namespace pikn
