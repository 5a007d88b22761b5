#pragma once

#include <map>
#include <string>
#include <vector>

#include "dctpipe/cost/arch.hpp"

namespace dctpipe::cost {

/// Calibrated widths for the DCT-entry stages, keyed by the number of input
/// channels (3n for the band-selection family). The residual structure is
/// fixed; only these widths were searched against the published cost totals.
struct RfaWidths {
    int stage2Width = 0;
    int stage2Out = 0;
    int stage3Width = 0;
    int stage3Out = 512;
};

struct VariantCatalog {
    int version = 1;
    std::map<int, RfaWidths> rfa;  // keyed by DCT input channels: 192, 96, 48
    int skip2Stage3Width = 0;

    static VariantCatalog builtin();
    static VariantCatalog from_text(const std::string& text);
    static VariantCatalog from_file(const std::string& path);
};

/// The committed calibration as config text (what builtin() parses).
const std::string& builtin_catalog_text();

/// Builds the symbolic architecture for a named variant. Known names:
/// resnet50, upsampling-rfa, fbs64, fbs32, fbs16, lp64, la64, ccpp64,
/// skip1-ccpp..skip4-ccpp. fbs64 mirrors upsampling-rfa and skip1-ccpp
/// mirrors ccpp64.
ArchSpec build_variant(const std::string& name, const VariantCatalog& catalog,
                       int cropSize = 224);

/// The ten canonical variants (aliases excluded), baseline first.
std::vector<std::string> canonical_variants();

}  // namespace dctpipe::cost
