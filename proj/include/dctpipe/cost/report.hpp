#pragma once

#include <string>
#include <vector>

#include "dctpipe/cost/arch.hpp"

namespace dctpipe::cost {

enum class ReportFormat { Csv, Json, Text };

ReportFormat parse_report_format(const std::string& name);

/// Summary lines ("3.86 GFLOPs / 25.6M params"), full per-layer dumps, and
/// the proportional comparison table, in the requested format.
std::string format_reports(const std::vector<CostReport>& reports, ReportFormat format,
                           bool perLayer = false);
std::string format_comparison(const std::vector<ComparisonRow>& rows, ReportFormat format);

}  // namespace dctpipe::cost
