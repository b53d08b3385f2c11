#include "dosim/trust/reputation.hpp"

#include <charconv>
#include <cstdio>
#include <vector>

namespace dosim::trust {

std::string_view to_string(ReputationMode mode) noexcept {
  switch (mode) {
    case ReputationMode::Inform: return "inform";
    case ReputationMode::Query: return "query";
    case ReputationMode::Reply: return "reply";
  }
  return "?";
}

namespace {

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string_view> split(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    const auto start = i;
    while (i < text.size() && text[i] != ' ') ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

double parse_double(std::string_view field) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw InvalidMessage("bad number \"" + std::string(field) + "\" in reputation record");
  }
  return out;
}

}  // namespace

std::string to_record(const ReputationMessage& msg) {
  std::string out = msg.origin_dra;
  for (double c : msg.centroid.v) out += ' ' + fmt_double(c);
  out += ' ' + fmt_double(msg.trust);
  out += ' ' + std::to_string(msg.weight);
  out += ' ';
  out += to_string(msg.mode);
  out += ' ' + fmt_double(msg.at);
  return out;
}

ReputationMessage parse_record(std::string_view record) {
  const auto fields = split(record);
  if (fields.size() != 9) {
    throw InvalidMessage("reputation record needs 9 fields, got " + std::to_string(fields.size()));
  }
  ReputationMessage msg;
  msg.origin_dra = std::string(fields[0]);
  for (std::size_t i = 0; i < flows::kFeatureDim; ++i) msg.centroid[i] = parse_double(fields[1 + i]);
  msg.trust = parse_double(fields[5]);
  {
    auto [ptr, ec] = std::from_chars(fields[6].data(), fields[6].data() + fields[6].size(), msg.weight);
    if (ec != std::errc{} || ptr != fields[6].data() + fields[6].size()) {
      throw InvalidMessage("bad weight \"" + std::string(fields[6]) + "\"");
    }
  }
  if (fields[7] == "inform") {
    msg.mode = ReputationMode::Inform;
  } else if (fields[7] == "query") {
    msg.mode = ReputationMode::Query;
  } else if (fields[7] == "reply") {
    msg.mode = ReputationMode::Reply;
  } else {
    throw InvalidMessage("unknown reputation mode \"" + std::string(fields[7]) + "\"");
  }
  msg.at = parse_double(fields[8]);
  return msg;
}

}  // namespace dosim::trust
