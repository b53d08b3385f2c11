#pragma once

#include <string>
#include <string_view>

#include "dosim/runner/metrics.hpp"

namespace dosim::runner {

enum class ReportFormat : std::uint8_t { Csv, Json };

std::optional<ReportFormat> parse_format(std::string_view text) noexcept;
std::string_view extension(ReportFormat format) noexcept;

/// csv: header row plus one data row, floats with six decimals, "NA" for
/// absent latencies. json: nested object with the same field names.
std::string emit_report(const MetricsReport& report, ReportFormat format);

}  // namespace dosim::runner
