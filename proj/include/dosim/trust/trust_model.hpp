#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "dosim/flows/features.hpp"
#include "dosim/trust/reputation.hpp"

namespace dosim::trust {

class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

using ClusterId = std::uint64_t;

enum class TrustClass : std::uint8_t { Malicious, Unknown, Benign };

std::string_view to_string(TrustClass cls) noexcept;

/// Trust 1 means benign, 0 malicious.
struct TrustParams {
  double tau = 0.5;        // attach radius
  double eta = 0.05;       // centroid learning rate
  double alpha = 0.1;      // trust smoothing
  double theta_mal = 0.3;
  double theta_ben = 0.7;
  double prior = 0.5;      // trust of a freshly created cluster

  /// Throws std::invalid_argument when a parameter leaves its range.
  void validate() const;
};

/// Centroid in feature space carrying a trust value. Shadow clusters come
/// from peers' reputation and have no local members until observed here.
struct TrustCluster {
  static constexpr std::size_t kMemberCap = 64;

  ClusterId id = 0;
  flows::FeatureVector centroid;
  double trust = 0.5;
  std::int64_t weight = 1;
  SimTime last_seen = 0.0;
  std::deque<FlowKey> member_flows;
  bool shadow = false;
};

struct Nearest {
  ClusterId id;
  double distance;
};

struct Observation {
  ClusterId id;
  bool created;
};

/// Streaming leader clustering with trust on the centroids. Owned by exactly
/// one detection agent. No cluster is ever removed, so ids are dense from 1.
class TrustModel {
 public:
  explicit TrustModel(TrustParams params = {});

  /// Euclidean nearest centroid, lowest id on ties.
  std::optional<Nearest> nearest_cluster(const flows::FeatureVector& v) const;

  /// Attach to the nearest cluster within tau (pulling its centroid towards
  /// v) or open a new one at v with the prior trust.
  Observation observe(const flows::FeatureVector& v, const FlowKey& flow, SimTime now);

  /// trust <- (1 - alpha) trust + alpha o.
  double update_trust(ClusterId id, double o);

  TrustClass classify(ClusterId id) const;

  /// Weighted trust merge into the nearest cluster within tau, or a new shadow
  /// cluster. Throws InvalidMessage for queries and weight < 1.
  ClusterId merge_reputation(const ReputationMessage& msg);

  struct Summary {
    double trust;
    std::int64_t weight;
  };
  std::optional<Summary> answer_query(const flows::FeatureVector& centroid) const;

  const TrustCluster& cluster(ClusterId id) const;
  std::span<const TrustCluster> clusters() const noexcept { return clusters_; }
  const TrustParams& params() const noexcept { return params_; }
  bool empty() const noexcept { return clusters_.empty(); }

 private:
  TrustCluster& mutable_cluster(ClusterId id);
  ClusterId create(const flows::FeatureVector& v, double trust, std::int64_t weight, SimTime now,
                   bool shadow);

  TrustParams params_;
  std::vector<TrustCluster> clusters_;
};

}  // namespace dosim::trust
