#pragma once

#include <string>

#include "json.hpp"
#include "spoofwatch/model.hpp"

namespace spoofwatch {

void to_json(nlohmann::json& j, const DepthWeights& w);
void from_json(const nlohmann::json& j, DepthWeights& w);
void to_json(nlohmann::json& j, const PriceDist& d);
void from_json(const nlohmann::json& j, PriceDist& d);
void to_json(nlohmann::json& j, const MarketModel& m);
void from_json(const nlohmann::json& j, MarketModel& m);

MarketModel load_model(const std::string& path);
void save_model(const MarketModel& m, const std::string& path);

}  // namespace spoofwatch
