#include "dosim/trust/trust_model.hpp"

#include <algorithm>
#include <string>

namespace dosim::trust {

std::string_view to_string(TrustClass cls) noexcept {
  switch (cls) {
    case TrustClass::Malicious: return "malicious";
    case TrustClass::Unknown: return "unknown";
    case TrustClass::Benign: return "benign";
  }
  return "?";
}

void TrustParams::validate() const {
  if (!(tau > 0)) throw std::invalid_argument("tau must be > 0");
  if (!(eta > 0 && eta < 1)) throw std::invalid_argument("eta must lie in (0, 1)");
  if (!(alpha > 0 && alpha <= 1)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(theta_mal >= 0 && theta_mal < theta_ben && theta_ben <= 1)) {
    throw std::invalid_argument("thresholds need 0 <= theta_mal < theta_ben <= 1");
  }
  if (!(prior >= 0 && prior <= 1)) throw std::invalid_argument("prior must lie in [0, 1]");
}

TrustModel::TrustModel(TrustParams params) : params_(params) { params_.validate(); }

const TrustCluster& TrustModel::cluster(ClusterId id) const {
  if (id == 0 || id > clusters_.size()) throw LookupError("unknown cluster id " + std::to_string(id));
  return clusters_[id - 1];
}

TrustCluster& TrustModel::mutable_cluster(ClusterId id) {
  return const_cast<TrustCluster&>(std::as_const(*this).cluster(id));
}

std::optional<Nearest> TrustModel::nearest_cluster(const flows::FeatureVector& v) const {
  std::optional<Nearest> best;
  for (const auto& c : clusters_) {
    const double d = flows::distance(c.centroid, v);
    if (!best || d < best->distance) best = Nearest{c.id, d};
  }
  return best;
}

ClusterId TrustModel::create(const flows::FeatureVector& v, double trust, std::int64_t weight,
                             SimTime now, bool shadow) {
  TrustCluster c;
  c.id = clusters_.size() + 1;
  c.centroid = v;
  c.trust = trust;
  c.weight = weight;
  c.last_seen = now;
  c.shadow = shadow;
  clusters_.push_back(std::move(c));
  return clusters_.back().id;
}

Observation TrustModel::observe(const flows::FeatureVector& v, const FlowKey& flow, SimTime now) {
  const auto nearest = nearest_cluster(v);
  if (!nearest || nearest->distance > params_.tau) {
    const auto id = create(v, params_.prior, 1, now, false);
    clusters_.back().member_flows.push_back(flow);
    return {id, true};
  }
  auto& c = mutable_cluster(nearest->id);
  for (std::size_t i = 0; i < flows::kFeatureDim; ++i) {
    c.centroid[i] += params_.eta * (v[i] - c.centroid[i]);
  }
  c.weight += 1;
  c.last_seen = now;
  c.shadow = false;
  std::erase(c.member_flows, flow);
  c.member_flows.push_back(flow);
  if (c.member_flows.size() > TrustCluster::kMemberCap) c.member_flows.pop_front();
  return {c.id, false};
}

double TrustModel::update_trust(ClusterId id, double o) {
  if (!(o >= 0.0 && o <= 1.0)) throw std::invalid_argument("trust observation outside [0, 1]");
  auto& c = mutable_cluster(id);
  c.trust = std::clamp((1.0 - params_.alpha) * c.trust + params_.alpha * o, 0.0, 1.0);
  return c.trust;
}

TrustClass TrustModel::classify(ClusterId id) const {
  const double t = cluster(id).trust;
  if (t < params_.theta_mal) return TrustClass::Malicious;
  if (t > params_.theta_ben) return TrustClass::Benign;
  return TrustClass::Unknown;
}

ClusterId TrustModel::merge_reputation(const ReputationMessage& msg) {
  if (msg.mode == ReputationMode::Query) throw InvalidMessage("a query carries no trust to merge");
  if (msg.weight < 1) {
    throw InvalidMessage("reputation weight " + std::to_string(msg.weight) + " < 1 from " + msg.origin_dra);
  }
  if (!(msg.trust >= 0.0 && msg.trust <= 1.0)) throw InvalidMessage("reputation trust outside [0, 1]");
  if (!msg.centroid.finite()) throw InvalidMessage("reputation centroid is not finite");

  const auto nearest = nearest_cluster(msg.centroid);
  if (!nearest || nearest->distance > params_.tau) {
    return create(msg.centroid, msg.trust, msg.weight, msg.at, true);
  }
  auto& c = mutable_cluster(nearest->id);
  const double total = static_cast<double>(c.weight + msg.weight);
  const double merged = (c.trust * static_cast<double>(c.weight) + msg.trust * static_cast<double>(msg.weight)) / total;
  c.trust = std::clamp(merged, 0.0, 1.0);
  c.weight += msg.weight;
  return c.id;
}

std::optional<TrustModel::Summary> TrustModel::answer_query(const flows::FeatureVector& centroid) const {
  const auto nearest = nearest_cluster(centroid);
  if (!nearest || nearest->distance > params_.tau) return std::nullopt;
  const auto& c = cluster(nearest->id);
  return Summary{c.trust, c.weight};
}

}  // namespace dosim::trust
