#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dosim/flows/features.hpp"

namespace dosim::trust {

class InvalidMessage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ReputationMode : std::uint8_t { Inform, Query, Reply };

std::string_view to_string(ReputationMode mode) noexcept;

/// Trust about a region of feature space, exchanged between detection agents.
/// A query carries only the centroid; inform and reply carry weight >= 1.
struct ReputationMessage {
  AgentId origin_dra;
  flows::FeatureVector centroid;
  double trust = 0.5;
  std::int64_t weight = 0;
  ReputationMode mode = ReputationMode::Inform;
  SimTime at = 0.0;

  bool operator==(const ReputationMessage&) const = default;
};

/// Flat record: origin, four components, trust, weight, mode, timestamp,
/// space separated. Floats are written with enough digits to round-trip.
std::string to_record(const ReputationMessage& msg);

/// Inverse of to_record. Throws InvalidMessage on malformed input.
ReputationMessage parse_record(std::string_view record);

}  // namespace dosim::trust
