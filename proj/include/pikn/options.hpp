#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string_view>

#include "pikn/error.hpp"

namespace pikn {

inline constexpr std::uint64_t kDefaultMemoryBudget = std::uint64_t{1} << 30;
inline constexpr const char* kMemoryBudgetEnv = "PIKN_MEMORY_BUDGET";

/// Parses a byte count such as "1048576", "512M", "2G" or "64k".
inline std::optional<std::uint64_t> parse_byte_count(std::string_view text) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr == text.data()) return std::nullopt;
    std::string_view rest(ptr, static_cast<std::size_t>(text.data() + text.size() - ptr));
    unsigned shift = 0;
    if (!rest.empty()) {
        if (rest.size() != 1) return std::nullopt;
        switch (std::toupper(static_cast<unsigned char>(rest[0]))) {
            case 'K': shift = 10; break;
            case 'M': shift = 20; break;
            case 'G': shift = 30; break;
            default: return std::nullopt;
        }
    }
    if (shift != 0 && value > (UINT64_MAX >> shift)) return std::nullopt;
    return value << shift;
}

/// Memory budget from $PIKN_MEMORY_BUDGET, or 1 GiB when unset or unparsable.
inline std::uint64_t default_memory_budget() {
    if (const char* env = std::getenv(kMemoryBudgetEnv))
        if (auto v = parse_byte_count(env)) return *v;
    return kDefaultMemoryBudget;
}

/// Knobs shared by every sieve-backed computation. None of them changes a result.
struct SieveOptions {
    /// Numbers per segment; 2^21 numbers is 128 KiB of odd-only bits.
    std::uint64_t segment_size = std::uint64_t{1} << 21;
    unsigned threads = 1;
    std::uint64_t memory_budget = default_memory_budget();
};

}  // namespace pikn
