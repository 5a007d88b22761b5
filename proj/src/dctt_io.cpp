#include "dctpipe/dctt_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

#include "dctpipe/crc32.hpp"
#include "dctpipe/error.hpp"

namespace dctpipe {

namespace {

void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

void put_u16(std::string& out, std::uint16_t v) {
    put_u8(out, static_cast<std::uint8_t>(v & 0xFF));
    put_u8(out, static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::string& out, std::uint32_t v) {
    put_u16(out, static_cast<std::uint16_t>(v & 0xFFFF));
    put_u16(out, static_cast<std::uint16_t>(v >> 16));
}

struct Reader {
    std::istream& in;

    std::uint8_t u8() {
        char c;
        if (!in.get(c)) throw Error(ErrorCode::TruncatedFile, "unexpected end of DCTT stream");
        return static_cast<std::uint8_t>(c);
    }
    std::uint16_t u16() {
        std::uint16_t lo = u8();
        return static_cast<std::uint16_t>(lo | (u8() << 8));
    }
    std::uint32_t u32() {
        std::uint32_t lo = u16();
        return lo | (static_cast<std::uint32_t>(u16()) << 16);
    }
    void bytes(void* dst, std::size_t count) {
        if (!in.read(static_cast<char*>(dst), static_cast<std::streamsize>(count)))
            throw Error(ErrorCode::TruncatedFile, "unexpected end of DCTT payload");
    }
};

}  // namespace

std::size_t dctt_header_size(Eigen::Index channels) {
    return 4 + 1 + 1 + 2 + 1 + 3 * 4 + static_cast<std::size_t>(channels) * 2 + 2 * 4;
}

void write_tensor(const DctTensor& t, std::ostream& sink, DcttDtype dtype) {
    std::string header;
    header.reserve(dctt_header_size(t.channels()));
    header.append("DCTT");
    put_u8(header, dctt_version);
    put_u8(header, static_cast<std::uint8_t>(dtype));
    put_u16(header, 0);  // reserved
    put_u8(header, 3);   // ndim
    put_u32(header, static_cast<std::uint32_t>(t.channels()));
    put_u32(header, static_cast<std::uint32_t>(t.rows));
    put_u32(header, static_cast<std::uint32_t>(t.cols));
    for (const auto& meta : t.channelMeta) {
        put_u8(header, meta.componentCode);
        put_u8(header, meta.freqIndex);
    }
    put_u32(header, t.cropWidth);
    put_u32(header, t.cropHeight);
    sink.write(header.data(), static_cast<std::streamsize>(header.size()));

    const std::size_t count = static_cast<std::size_t>(t.channels()) * static_cast<std::size_t>(t.positions());
    std::string payload;
    if (dtype == DcttDtype::Float32) {
        payload.resize(count * 4);
        static_assert(std::numeric_limits<float>::is_iec559);
        std::memcpy(payload.data(), t.data.data(), count * 4);  // little-endian host
    } else {
        payload.resize(count * 2);
        const float* src = t.data.data();
        for (std::size_t i = 0; i < count; ++i) {
            float v = std::round(src[i]);
            if (v < -32768.f || v > 32767.f)
                throw Error(ErrorCode::InvalidState,
                            "value " + std::to_string(src[i]) + " does not fit int16 payload");
            auto s = static_cast<std::int16_t>(v);
            std::memcpy(payload.data() + i * 2, &s, 2);
        }
    }
    sink.write(payload.data(), static_cast<std::streamsize>(payload.size()));

    std::string crc;
    put_u32(crc, crc32(payload.data(), payload.size()));
    sink.write(crc.data(), 4);
    if (!sink) throw Error(ErrorCode::UnwritableOutput, "DCTT write failed");
}

void write_tensor_file(const DctTensor& t, const std::string& path, DcttDtype dtype) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::UnwritableOutput, "cannot open " + path + " for writing");
    write_tensor(t, out, dtype);
}

DctTensor read_tensor(std::istream& source) {
    Reader r{source};
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, "DCTT", 4) != 0)
        throw Error(ErrorCode::FormatVersionMismatch, "bad magic, not a DCTT file");
    const std::uint8_t version = r.u8();
    if (version != dctt_version)
        throw Error(ErrorCode::FormatVersionMismatch,
                    "unsupported DCTT version " + std::to_string(version));
    const std::uint8_t dtypeCode = r.u8();
    if (dtypeCode != static_cast<std::uint8_t>(DcttDtype::Float32) &&
        dtypeCode != static_cast<std::uint8_t>(DcttDtype::Int16))
        throw Error(ErrorCode::FormatVersionMismatch, "unknown dtype code " + std::to_string(dtypeCode));
    if (r.u16() != 0) throw Error(ErrorCode::FormatVersionMismatch, "nonzero reserved field");
    if (r.u8() != 3) throw Error(ErrorCode::FormatVersionMismatch, "ndim must be 3");

    DctTensor t;
    const std::uint32_t channels = r.u32();
    const std::uint32_t rows = r.u32();
    const std::uint32_t cols = r.u32();
    t.rows = rows;
    t.cols = cols;
    t.channelMeta.resize(channels);
    for (auto& meta : t.channelMeta) {
        meta.componentCode = r.u8();
        meta.freqIndex = r.u8();
    }
    t.cropWidth = r.u32();
    t.cropHeight = r.u32();

    const std::size_t count = static_cast<std::size_t>(channels) * rows * cols;
    const std::size_t elem = dtypeCode == static_cast<std::uint8_t>(DcttDtype::Float32) ? 4 : 2;
    std::vector<char> payload(count * elem);
    r.bytes(payload.data(), payload.size());
    const std::uint32_t expected = r.u32();
    const std::uint32_t actual = crc32(payload.data(), payload.size());
    if (expected != actual)
        throw Error(ErrorCode::ChecksumMismatch, "payload CRC32 mismatch");

    t.data.resize(channels, static_cast<Eigen::Index>(rows) * cols);
    if (elem == 4) {
        std::memcpy(t.data.data(), payload.data(), payload.size());
    } else {
        float* dst = t.data.data();
        for (std::size_t i = 0; i < count; ++i) {
            std::int16_t s;
            std::memcpy(&s, payload.data() + i * 2, 2);
            dst[i] = static_cast<float>(s);
        }
    }
    return t;
}

DctTensor read_tensor_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::TruncatedFile, "cannot open " + path);
    return read_tensor(in);
}

}  // namespace dctpipe
