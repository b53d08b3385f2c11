#include "dosim/runner/report.hpp"

#include <cinttypes>
#include <cstdio>

#include "json.hpp"

namespace dosim::runner {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string latency(const std::optional<double>& v) { return v ? fixed6(*v) : "NA"; }

}  // namespace

std::optional<ReportFormat> parse_format(std::string_view text) noexcept {
  if (text == "csv") return ReportFormat::Csv;
  if (text == "json") return ReportFormat::Json;
  return std::nullopt;
}

std::string_view extension(ReportFormat format) noexcept { return format == ReportFormat::Csv ? "csv" : "json"; }

std::string emit_report(const MetricsReport& r, ReportFormat format) {
  const auto& c = r.conservation;
  if (format == ReportFormat::Csv) {
    std::string out =
        "detection_latency,mitigation_latency,false_positive_rate,goodput_before,goodput_during,goodput_after,"
        "injected,delivered,queue_dropped,filter_dropped,in_flight,alarms,rules\n";
    out += latency(r.detection_latency) + ',' + latency(r.mitigation_latency) + ',' + fixed6(r.false_positive_rate) +
           ',' + fixed6(r.goodput_ratio.before) + ',' + fixed6(r.goodput_ratio.during) + ',' +
           fixed6(r.goodput_ratio.after);
    for (std::uint64_t v : {c.injected, c.delivered, c.queue_dropped, c.filter_dropped, c.in_flight, r.alarms, r.rules}) {
      out += ',' + std::to_string(v);
    }
    out += '\n';
    return out;
  }

  nlohmann::ordered_json j;
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(); };
  j["detection_latency"] = opt(r.detection_latency);
  j["mitigation_latency"] = opt(r.mitigation_latency);
  j["false_positive_rate"] = r.false_positive_rate;
  j["goodput_ratio"] = {{"before", r.goodput_ratio.before},
                        {"during", r.goodput_ratio.during},
                        {"after", r.goodput_ratio.after}};
  j["conservation"] = {{"injected", c.injected},
                       {"delivered", c.delivered},
                       {"queue_dropped", c.queue_dropped},
                       {"filter_dropped", c.filter_dropped},
                       {"in_flight", c.in_flight}};
  j["alarms"] = r.alarms;
  j["rules"] = r.rules;
  return j.dump(2) + "\n";
}

}  // namespace dosim::runner
