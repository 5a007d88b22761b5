#include "dctpipe/jpeg/decoder.hpp"

#include <string>

#include "dctpipe/error.hpp"

namespace dctpipe::jpeg {

namespace {

// marker bytes (second byte of the FF xx pair)
constexpr std::uint8_t kSOI = 0xD8;
constexpr std::uint8_t kEOI = 0xD9;
constexpr std::uint8_t kSOS = 0xDA;
constexpr std::uint8_t kDQT = 0xDB;
constexpr std::uint8_t kDNL = 0xDC;
constexpr std::uint8_t kDRI = 0xDD;
constexpr std::uint8_t kDHT = 0xC4;
constexpr std::uint8_t kDAC = 0xCC;
constexpr std::uint8_t kCOM = 0xFE;

std::string hex_marker(std::uint8_t m) {
    static const char* digits = "0123456789ABCDEF";
    return std::string("FF") + digits[m >> 4] + digits[m & 15];
}

struct ByteCursor {
    std::span<const std::uint8_t> data;
    std::size_t pos = 0;

    std::uint8_t u8() {
        if (pos >= data.size()) throw Error(ErrorCode::MalformedSegment, "segment underflow at end of stream");
        return data[pos++];
    }
    std::uint16_t u16() {
        std::uint16_t hi = u8();
        return static_cast<std::uint16_t>((hi << 8) | u8());
    }
    void skip(std::size_t n) {
        if (pos + n > data.size()) throw Error(ErrorCode::MalformedSegment, "segment length overruns stream");
        pos += n;
    }

    /// Next marker byte; fill bytes (repeated 0xFF) are allowed before it.
    std::uint8_t next_marker() {
        std::uint8_t b = u8();
        if (b != 0xFF) throw Error(ErrorCode::MalformedSegment, "expected marker, got stray byte");
        std::uint8_t m = u8();
        while (m == 0xFF) m = u8();
        return m;
    }
};

void build_huff_decode_tables(HuffTable& table) {
    int total = 0;
    for (int l = 0; l < 16; ++l) total += table.counts[l];
    if (total == 0 || total > 256)
        throw Error(ErrorCode::MalformedSegment, "Huffman table with invalid symbol count");

    std::int32_t code = 0;
    int symbolIndex = 0;
    for (int l = 1; l <= 16; ++l) {
        table.valptr[l] = symbolIndex;
        table.mincode[l] = code;
        const int count = table.counts[l - 1];
        code += count;
        symbolIndex += count;
        table.maxcode[l] = count ? code - 1 : -1;
        if (code > (1 << l))
            throw Error(ErrorCode::MalformedSegment, "Huffman code space overflow");
        code <<= 1;
    }
}

void parse_dqt(ByteCursor& cur, ParsedJpeg& out, std::size_t segEnd) {
    while (cur.pos < segEnd) {
        const std::uint8_t pqTq = cur.u8();
        const int precision = pqTq >> 4;
        const int id = pqTq & 15;
        if (precision > 1) throw Error(ErrorCode::MalformedSegment, "bad quantization table precision");
        if (id > 3) throw Error(ErrorCode::MalformedSegment, "quantization table id > 3");
        QuantTable& table = out.quantTables[static_cast<std::size_t>(id)];
        for (int k = 0; k < 64; ++k)
            table.values[static_cast<std::size_t>(k)] = precision ? cur.u16() : cur.u8();
        table.defined = true;
    }
    if (cur.pos != segEnd) throw Error(ErrorCode::MalformedSegment, "DQT length mismatch");
}

void parse_dht(ByteCursor& cur, ParsedJpeg& out, std::size_t segEnd) {
    while (cur.pos < segEnd) {
        const std::uint8_t tcTh = cur.u8();
        const int tableClass = tcTh >> 4;
        const int id = tcTh & 15;
        if (tableClass > 1) throw Error(ErrorCode::MalformedSegment, "bad Huffman table class");
        if (id > 3) throw Error(ErrorCode::MalformedSegment, "Huffman table id > 3");
        HuffTable& table = tableClass ? out.acTables[static_cast<std::size_t>(id)]
                                      : out.dcTables[static_cast<std::size_t>(id)];
        table.symbols.clear();
        int total = 0;
        for (int l = 0; l < 16; ++l) {
            table.counts[static_cast<std::size_t>(l)] = cur.u8();
            total += table.counts[static_cast<std::size_t>(l)];
        }
        table.symbols.reserve(static_cast<std::size_t>(total));
        for (int i = 0; i < total; ++i) table.symbols.push_back(cur.u8());
        build_huff_decode_tables(table);
        table.defined = true;
    }
    if (cur.pos != segEnd) throw Error(ErrorCode::MalformedSegment, "DHT length mismatch");
}

void parse_sof0(ByteCursor& cur, ParsedJpeg& out, std::size_t segEnd) {
    out.precision = cur.u8();
    if (out.precision != 8)
        throw Error(ErrorCode::UnsupportedMarker,
                    std::to_string(out.precision) + "-bit precision (8-bit baseline only)");
    out.height = cur.u16();
    out.width = cur.u16();
    if (out.height == 0)
        throw Error(ErrorCode::UnsupportedMarker, "deferred height via DNL");
    if (out.width == 0) throw Error(ErrorCode::MalformedSegment, "zero frame width");
    const int numComponents = cur.u8();
    if (numComponents < 1 || numComponents > 3)
        throw Error(ErrorCode::UnsupportedMarker,
                    std::to_string(numComponents) + "-component frame (1 or 3 components only)");

    out.components.resize(static_cast<std::size_t>(numComponents));
    for (auto& comp : out.components) {
        comp.id = cur.u8();
        const std::uint8_t hv = cur.u8();
        comp.hSampling = hv >> 4;
        comp.vSampling = hv & 15;
        comp.quantTableId = cur.u8();
        if (comp.quantTableId > 3)
            throw Error(ErrorCode::MalformedSegment, "component references quant table id > 3");
        if (comp.hSampling < 1 || comp.hSampling > 2 || comp.vSampling < 1 || comp.vSampling > 2)
            throw Error(ErrorCode::UnsupportedMarker, "sampling factors outside {1,2}");
    }
    if (cur.pos != segEnd) throw Error(ErrorCode::MalformedSegment, "SOF0 length mismatch");

    // only 4:4:4 (all 1,1) and 4:2:0 (Y 2,2; chroma 1,1) are in scope
    bool all11 = true;
    for (const auto& comp : out.components)
        all11 = all11 && comp.hSampling == 1 && comp.vSampling == 1;
    const bool is420 = out.components.size() == 3 && out.components[0].hSampling == 2 &&
                       out.components[0].vSampling == 2 && out.components[1].hSampling == 1 &&
                       out.components[1].vSampling == 1 && out.components[2].hSampling == 1 &&
                       out.components[2].vSampling == 1;
    if (!all11 && !is420)
        throw Error(ErrorCode::UnsupportedMarker, "subsampling layout (4:4:4 and 4:2:0 only)");

    out.hMax = is420 ? 2 : 1;
    out.vMax = is420 ? 2 : 1;
    out.mcuCols = (out.width + 8 * out.hMax - 1) / (8 * out.hMax);
    out.mcuRows = (out.height + 8 * out.vMax - 1) / (8 * out.vMax);
    static const ComponentId roles[3] = {ComponentId::Y, ComponentId::Cb, ComponentId::Cr};
    for (std::size_t i = 0; i < out.components.size(); ++i) {
        auto& comp = out.components[i];
        comp.role = roles[i];
        comp.sampleWidth = (out.width * comp.hSampling + out.hMax - 1) / out.hMax;
        comp.sampleHeight = (out.height * comp.vSampling + out.vMax - 1) / out.vMax;
        comp.blockCols = out.mcuCols * comp.hSampling;
        comp.blockRows = out.mcuRows * comp.vSampling;
    }
}

void parse_sos(ByteCursor& cur, ParsedJpeg& out, std::size_t segEnd) {
    if (out.components.empty())
        throw Error(ErrorCode::MalformedSegment, "SOS before SOF0");
    const int numScanComponents = cur.u8();
    if (numScanComponents != static_cast<int>(out.components.size()))
        throw Error(ErrorCode::UnsupportedMarker, "non-interleaved / multi-scan stream");
    for (int i = 0; i < numScanComponents; ++i) {
        const std::uint8_t id = cur.u8();
        const std::uint8_t tables = cur.u8();
        bool found = false;
        for (auto& comp : out.components) {
            if (comp.id != id) continue;
            comp.dcTableId = tables >> 4;
            comp.acTableId = tables & 15;
            if (comp.dcTableId > 3 || comp.acTableId > 3)
                throw Error(ErrorCode::MalformedSegment, "scan references Huffman table id > 3");
            found = true;
        }
        if (!found)
            throw Error(ErrorCode::MalformedSegment, "scan component id not declared in frame");
    }
    const std::uint8_t ss = cur.u8();
    const std::uint8_t se = cur.u8();
    const std::uint8_t ahAl = cur.u8();
    if (ss != 0 || se != 63 || ahAl != 0)
        throw Error(ErrorCode::UnsupportedMarker, "non-baseline spectral selection in scan header");
    if (cur.pos != segEnd) throw Error(ErrorCode::MalformedSegment, "SOS length mismatch");

    for (const auto& comp : out.components) {
        if (!out.quantTables[static_cast<std::size_t>(comp.quantTableId)].defined)
            throw Error(ErrorCode::MissingTable,
                        "quantization table " + std::to_string(comp.quantTableId) + " undefined");
        if (comp.dcTableId < 0 || !out.dcTables[static_cast<std::size_t>(comp.dcTableId)].defined)
            throw Error(ErrorCode::MissingTable,
                        "DC Huffman table " + std::to_string(comp.dcTableId) + " undefined");
        if (comp.acTableId < 0 || !out.acTables[static_cast<std::size_t>(comp.acTableId)].defined)
            throw Error(ErrorCode::MissingTable,
                        "AC Huffman table " + std::to_string(comp.acTableId) + " undefined");
    }
}

/// Entropy-segment bit reader with 0xFF00 unstuffing. Restart markers pause
/// the bit stream; any other marker ends it.
class BitReader {
public:
    BitReader(std::span<const std::uint8_t> data, std::size_t start) : data_(data), pos_(start) {}

    int next_bit() {
        if (bitCount_ == 0) {
            if (!fill_byte()) return -1;
        }
        --bitCount_;
        return (currentByte_ >> bitCount_) & 1;
    }

    std::int32_t receive(int numBits) {
        std::int32_t v = 0;
        for (int i = 0; i < numBits; ++i) {
            const int bit = next_bit();
            if (bit < 0) throw Error(ErrorCode::TruncatedStream, "entropy data ended mid-coefficient");
            v = (v << 1) | bit;
        }
        return v;
    }

    /// Byte-aligns and consumes the next marker, which must be RSTn; returns n.
    int take_restart_marker() {
        bitCount_ = 0;
        if (pendingMarker_ >= 0) {
            const int m = pendingMarker_;
            pendingMarker_ = -1;
            if (m >= 0xD0 && m <= 0xD7) return m - 0xD0;
            throw Error(ErrorCode::RestartMarkerMismatch,
                        "expected restart marker, found " + hex_marker(static_cast<std::uint8_t>(m)));
        }
        if (pos_ + 1 >= data_.size())
            throw Error(ErrorCode::TruncatedStream, "stream ended where a restart marker was expected");
        if (data_[pos_] != 0xFF)
            throw Error(ErrorCode::RestartMarkerMismatch, "expected restart marker, found entropy data");
        const std::uint8_t m = data_[pos_ + 1];
        if (m < 0xD0 || m > 0xD7)
            throw Error(ErrorCode::RestartMarkerMismatch, "expected restart marker, found " + hex_marker(m));
        pos_ += 2;
        return m - 0xD0;
    }

private:
    bool fill_byte() {
        if (pendingMarker_ >= 0) return false;  // stopped at a marker
        if (pos_ >= data_.size()) return false;
        std::uint8_t b = data_[pos_++];
        if (b == 0xFF) {
            // skip fill bytes
            while (pos_ < data_.size() && data_[pos_] == 0xFF) ++pos_;
            if (pos_ >= data_.size()) return false;
            const std::uint8_t next = data_[pos_];
            if (next == 0x00) {
                ++pos_;  // stuffed data byte 0xFF
            } else {
                pendingMarker_ = next;
                ++pos_;
                return false;
            }
        }
        currentByte_ = b;
        bitCount_ = 8;
        return true;
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
    std::uint8_t currentByte_ = 0;
    int bitCount_ = 0;
    int pendingMarker_ = -1;
};

int decode_huff_symbol(BitReader& bits, const HuffTable& table) {
    std::int32_t code = 0;
    for (int length = 1; length <= 16; ++length) {
        const int bit = bits.next_bit();
        if (bit < 0) throw Error(ErrorCode::TruncatedStream, "entropy data ended mid-symbol");
        code = (code << 1) | bit;
        if (table.maxcode[length] >= 0 && code <= table.maxcode[length])
            return table.symbols[static_cast<std::size_t>(
                table.valptr[length] + code - table.mincode[length])];
    }
    throw Error(ErrorCode::CorruptEntropyStream, "invalid Huffman code");
}

std::int32_t extend(std::int32_t v, int magnitude) {
    return v < (1 << (magnitude - 1)) ? v - (1 << magnitude) + 1 : v;
}

void decode_block(BitReader& bits, const HuffTable& dc, const HuffTable& ac, std::int32_t& pred,
                  float* block64) {
    const int dcSize = decode_huff_symbol(bits, dc);
    if (dcSize > 11)
        throw Error(ErrorCode::CorruptEntropyStream, "DC magnitude category > 11");
    std::int32_t diff = dcSize ? extend(bits.receive(dcSize), dcSize) : 0;
    pred += diff;
    if (pred < -2048 || pred > 2047)
        throw Error(ErrorCode::CorruptEntropyStream, "DC value outside signed 12-bit range");
    block64[0] = static_cast<float>(pred);

    int k = 1;
    while (k <= 63) {
        const int rs = decode_huff_symbol(bits, ac);
        const int run = rs >> 4;
        const int size = rs & 15;
        if (size == 0) {
            if (run == 15) {
                k += 16;  // ZRL
                continue;
            }
            break;  // EOB
        }
        if (size > 10)
            throw Error(ErrorCode::CorruptEntropyStream, "AC magnitude category > 10");
        k += run;
        if (k > 63)
            throw Error(ErrorCode::CorruptEntropyStream, "coefficient index overflow past 63");
        block64[k] = static_cast<float>(extend(bits.receive(size), size));
        ++k;
    }
}

}  // namespace

ParsedJpeg parse_headers(std::span<const std::uint8_t> stream) {
    ByteCursor cur{stream};
    if (cur.u8() != 0xFF || cur.u8() != kSOI)
        throw Error(ErrorCode::MalformedSegment, "stream does not begin with SOI");

    ParsedJpeg out;
    bool sawSof = false;
    for (;;) {
        const std::uint8_t marker = cur.next_marker();
        if (marker == kEOI)
            throw Error(ErrorCode::MalformedSegment, "EOI before any scan");
        if (marker >= 0xD0 && marker <= 0xD7)
            throw Error(ErrorCode::MalformedSegment, "restart marker outside entropy data");

        if (marker == kDNL) throw Error(ErrorCode::UnsupportedMarker, "DNL segment");
        if (marker == kDAC) throw Error(ErrorCode::UnsupportedMarker, "arithmetic coding (DAC)");
        if (marker == 0xC2) throw Error(ErrorCode::UnsupportedMarker, "progressive (SOF2)");
        if (marker >= 0xC0 && marker <= 0xCF && marker != 0xC0 && marker != kDHT)
            throw Error(ErrorCode::UnsupportedMarker,
                        "non-baseline frame type " + hex_marker(marker));

        const std::size_t lengthPos = cur.pos;
        const std::uint16_t length = cur.u16();
        if (length < 2) throw Error(ErrorCode::MalformedSegment, "segment length < 2");
        const std::size_t segEnd = lengthPos + length;
        if (segEnd > stream.size())
            throw Error(ErrorCode::MalformedSegment, "segment length overruns stream");

        switch (marker) {
            case 0xC0:  // SOF0
                if (sawSof) throw Error(ErrorCode::MalformedSegment, "multiple SOF0 segments");
                parse_sof0(cur, out, segEnd);
                sawSof = true;
                break;
            case kDHT:
                parse_dht(cur, out, segEnd);
                break;
            case kDQT:
                parse_dqt(cur, out, segEnd);
                break;
            case kDRI:
                if (length != 4) throw Error(ErrorCode::MalformedSegment, "DRI length must be 4");
                out.restartInterval = cur.u16();
                break;
            case kSOS:
                if (!sawSof) throw Error(ErrorCode::MalformedSegment, "SOS before SOF0");
                parse_sos(cur, out, segEnd);
                out.entropyOffset = cur.pos;
                return out;
            case kCOM:
            default:
                // APPn / COM / other skippable segments (EXIF et al.)
                if (marker == kCOM || (marker >= 0xE0 && marker <= 0xEF)) {
                    cur.pos = lengthPos;
                    cur.skip(length);
                } else {
                    throw Error(ErrorCode::MalformedSegment,
                                "unexpected marker " + hex_marker(marker) + " before SOS");
                }
                break;
        }
    }
}

std::vector<CoeffBlockGrid> decode_coefficients(const ParsedJpeg& jpeg,
                                                std::span<const std::uint8_t> stream) {
    if (jpeg.entropyOffset == 0 || jpeg.entropyOffset > stream.size())
        throw Error(ErrorCode::InvalidState, "entropy offset outside stream; run parse_headers first");

    std::vector<CoeffBlockGrid> grids(jpeg.components.size());
    for (std::size_t i = 0; i < jpeg.components.size(); ++i) {
        const auto& comp = jpeg.components[i];
        auto& grid = grids[i];
        grid.component = comp.role;
        grid.blockRows = comp.blockRows;
        grid.blockCols = comp.blockCols;
        grid.sampleWidth = comp.sampleWidth;
        grid.sampleHeight = comp.sampleHeight;
        grid.dequantized = false;
        grid.valueKind = CoeffValueKind::QuantizedInt;
        grid.blocks.setZero(grid.block_count(), 64);
    }

    BitReader bits(stream, jpeg.entropyOffset);
    std::vector<std::int32_t> predictors(jpeg.components.size(), 0);
    const long totalMcus = static_cast<long>(jpeg.mcuRows) * jpeg.mcuCols;
    int restartIndex = 0;

    for (long mcu = 0; mcu < totalMcus; ++mcu) {
        if (jpeg.restartInterval > 0 && mcu > 0 && mcu % jpeg.restartInterval == 0) {
            const int n = bits.take_restart_marker();
            if (n != restartIndex)
                throw Error(ErrorCode::RestartMarkerMismatch,
                            "restart marker out of sequence: expected RST" +
                                std::to_string(restartIndex) + ", got RST" + std::to_string(n));
            restartIndex = (restartIndex + 1) & 7;
            std::fill(predictors.begin(), predictors.end(), 0);
        }
        const long mcuRow = mcu / jpeg.mcuCols;
        const long mcuCol = mcu % jpeg.mcuCols;
        for (std::size_t ci = 0; ci < jpeg.components.size(); ++ci) {
            const auto& comp = jpeg.components[ci];
            const auto& dc = jpeg.dcTables[static_cast<std::size_t>(comp.dcTableId)];
            const auto& ac = jpeg.acTables[static_cast<std::size_t>(comp.acTableId)];
            for (int v = 0; v < comp.vSampling; ++v) {
                for (int h = 0; h < comp.hSampling; ++h) {
                    const long blockRow = mcuRow * comp.vSampling + v;
                    const long blockCol = mcuCol * comp.hSampling + h;
                    float* block = grids[ci].blocks.row(blockRow * comp.blockCols + blockCol).data();
                    decode_block(bits, dc, ac, predictors[ci], block);
                }
            }
        }
    }
    return grids;
}

}  // namespace dctpipe::jpeg
