#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "dctpipe/dct_tensor.hpp"

namespace dctpipe {

/// DCTT container payload types.
enum class DcttDtype : std::uint8_t { Float32 = 1, Int16 = 2 };

inline constexpr std::uint8_t dctt_version = 1;

/// Writes a tensor in the DCTT binary layout:
///   magic "DCTT" | version u8 | dtype u8 | reserved u16 | ndim u8 = 3 |
///   dims 3 x u32 LE (channels, rows, cols) |
///   channelMeta channels x (componentCode u8, freqIndex u8) |
///   cropExtent u32 width, u32 height |
///   payload row-major LE | crc32(payload) u32 LE
void write_tensor(const DctTensor& t, std::ostream& sink, DcttDtype dtype = DcttDtype::Float32);
void write_tensor_file(const DctTensor& t, const std::string& path,
                       DcttDtype dtype = DcttDtype::Float32);

DctTensor read_tensor(std::istream& source);
DctTensor read_tensor_file(const std::string& path);

/// Header size in bytes for a given channel count (payload excluded).
std::size_t dctt_header_size(Eigen::Index channels);

}  // namespace dctpipe
