#pragma once

#include "maxavg/tf/instances.hpp"
#include "maxavg/tf/sparsify.hpp"

#include <json.hpp>

#include <string>

namespace maxavg::tf {

using nlohmann::json;

// Endpoints are exact rational strings; positions are decimal strings (they can exceed 64 bits).
json to_json(const DyadicInterval& i);
json to_json(const Tile& t);
json to_json(const Multitile& m);
json to_json(const RankOneParams& p);
json to_json(const FrequencyLaw& law);
json to_json(const RankOneInstance& inst);
json to_json(const LacunaryTree& t);
json to_json(const Forest& f);
json to_json(const StepFunction& f);
json to_json(const SplitResult& r);
json to_json(const SplitAudit& a);
json to_json(const IteratedStopping& s);
json to_json(const StandardMeasurements& m);
json to_json(const Fixtures& f);
json to_json(const Verdict& v);

DyadicInterval interval_from_json(const json& j);
Tile tile_from_json(const json& j);
Multitile multitile_from_json(const json& j);
RankOneParams params_from_json(const json& j);
FrequencyLaw law_from_json(const json& j);
RankOneInstance rank_one_from_json(const json& j);
Forest forest_from_json(const json& j);
// Throws std::invalid_argument when the version does not match kFixtureVersion.
Fixtures fixtures_from_json(const json& j);

// <stem>.json holds spacing, window and scale; <stem>.bin holds count pairs (re, im) of little-endian float64.
void write_sampled(const std::string& stem, const SampledFunction& f, long scale = 0);
SampledFunction read_sampled(const std::string& stem);

}  // namespace maxavg::tf
