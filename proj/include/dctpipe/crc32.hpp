#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace dctpipe {

namespace detail {
inline constexpr std::array<std::uint32_t, 256> crc32_table = [] {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int k = 0; k < 8; ++k) c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
        table[i] = c;
    }
    return table;
}();
}  // namespace detail

/// CRC-32 (IEEE 802.3 polynomial, reflected). `seed` allows incremental use.
inline std::uint32_t crc32(const void* data, std::size_t size, std::uint32_t seed = 0) {
    const auto* bytes = static_cast<const std::uint8_t*>(data);
    std::uint32_t c = seed ^ 0xFFFFFFFFu;
    for (std::size_t i = 0; i < size; ++i)
        c = detail::crc32_table[(c ^ bytes[i]) & 0xFFu] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

}  // namespace dctpipe
