#pragma once

#include <json.hpp>

#include "gesim/bounds.hpp"
#include "gesim/csicodec.hpp"
#include "gesim/exactdist.hpp"
#include "gesim/gechannel.hpp"
#include "gesim/harness.hpp"

namespace gesim {

void to_json(nlohmann::ordered_json& j, const ChannelParams& p);
void to_json(nlohmann::ordered_json& j, const CmfValue& v);
void to_json(nlohmann::ordered_json& j, const KDistribution& d);
void to_json(nlohmann::ordered_json& j, const Estimate& e);
void to_json(nlohmann::ordered_json& j, const RateEstimate& e);
void to_json(nlohmann::ordered_json& j, const TrialOutcome& o);
void to_json(nlohmann::ordered_json& j, const ExperimentReport& r);
void to_json(nlohmann::ordered_json& j, const BaselineReport& r);
void to_json(nlohmann::ordered_json& j, const BoundsResult& b);
void to_json(nlohmann::ordered_json& j, const EfficiencyReport& e);

}  // namespace gesim
