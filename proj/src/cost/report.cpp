#include "dctpipe/cost/report.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>

#include "dctpipe/error.hpp"

namespace dctpipe::cost {

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

nlohmann::json report_to_json(const CostReport& r, bool perLayer) {
    nlohmann::json j{
        {"variant", r.variant},
        {"input", r.inputDescriptor},
        {"gflops", r.gflops()},
        {"params", r.totalParams},
        {"mparams", r.mparams()},
        {"macs", r.totalMacs},
        {"extra_flops", r.totalExtraFlops},
        {"convention", r.convention},
        {"input_blocks", r.inputBlocks},
        {"idct_flops", r.idctFlops},
    };
    if (perLayer) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : r.rows)
            rows.push_back({{"name", row.name},
                            {"kind", layer_kind_name(row.kind)},
                            {"params", row.params},
                            {"macs", row.macs},
                            {"extra_flops", row.extraFlops},
                            {"out_shape", {row.outChannels, row.outHeight, row.outWidth}}});
        j["layers"] = std::move(rows);
    }
    return j;
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    if (name == "text") return ReportFormat::Text;
    throw Error(ErrorCode::BadConfig, "unknown format '" + name + "' (csv|json|text)");
}

std::string format_reports(const std::vector<CostReport>& reports, ReportFormat format,
                           bool perLayer) {
    std::ostringstream out;
    switch (format) {
        case ReportFormat::Json: {
            nlohmann::json j = nlohmann::json::array();
            for (const auto& r : reports) j.push_back(report_to_json(r, perLayer));
            out << j.dump(2) << "\n";
            break;
        }
        case ReportFormat::Csv: {
            if (perLayer) {
                out << "variant,layer,kind,params,macs,extra_flops,out_channels,out_h,out_w\n";
                for (const auto& r : reports)
                    for (const auto& row : r.rows)
                        out << r.variant << ',' << row.name << ',' << layer_kind_name(row.kind)
                            << ',' << row.params << ',' << row.macs << ',' << row.extraFlops << ','
                            << row.outChannels << ',' << row.outHeight << ',' << row.outWidth
                            << '\n';
            } else {
                out << "variant,gflops,params,macs,extra_flops\n";
                for (const auto& r : reports)
                    out << r.variant << ',' << fixed(r.gflops(), 4) << ',' << r.totalParams << ','
                        << r.totalMacs << ',' << r.totalExtraFlops << '\n';
            }
            break;
        }
        case ReportFormat::Text: {
            for (const auto& r : reports) {
                out << r.variant << " (" << r.inputDescriptor << "): " << fixed(r.gflops(), 2)
                    << " GFLOPs / " << fixed(r.mparams(), 1) << "M params  [macs=" << r.totalMacs
                    << " params=" << r.totalParams << "]\n";
                if (perLayer)
                    for (const auto& row : r.rows)
                        out << "  " << row.name << " (" << layer_kind_name(row.kind)
                            << "): params=" << row.params << " macs=" << row.macs
                            << " extra=" << row.extraFlops << " out=" << row.outChannels << "x"
                            << row.outHeight << "x" << row.outWidth << "\n";
            }
            break;
        }
    }
    return out.str();
}

std::string format_comparison(const std::vector<ComparisonRow>& rows, ReportFormat format) {
    std::ostringstream out;
    switch (format) {
        case ReportFormat::Json: {
            nlohmann::json j = nlohmann::json::array();
            for (const auto& r : rows)
                j.push_back({{"variant", r.variant},
                             {"gflops", r.gflops},
                             {"mparams", r.mparams},
                             {"flops_ratio", r.flopsRatio},
                             {"params_ratio", r.paramsRatio}});
            out << j.dump(2) << "\n";
            break;
        }
        case ReportFormat::Csv:
            out << "variant,gflops,mparams,flops_ratio,params_ratio\n";
            for (const auto& r : rows)
                out << r.variant << ',' << fixed(r.gflops, 4) << ',' << fixed(r.mparams, 4) << ','
                    << fixed(r.flopsRatio, 4) << ',' << fixed(r.paramsRatio, 4) << '\n';
            break;
        case ReportFormat::Text:
            for (const auto& r : rows)
                out << r.variant << ": " << fixed(r.gflops, 2) << " GFLOPs ("
                    << fixed(r.flopsRatio, 3) << "x), " << fixed(r.mparams, 1) << "M params ("
                    << fixed(r.paramsRatio, 3) << "x)\n";
            break;
    }
    return out.str();
}

}  // namespace dctpipe::cost
