#pragma once

#include "fluctuate/dist.hpp"
#include "fluctuate/limits.hpp"
#include "fluctuate/lpsm.hpp"
#include "fluctuate/model.hpp"
#include "fluctuate/sim.hpp"
#include "fluctuate/tail.hpp"

#include <json.hpp>

#include <string>

namespace fluctuate::io {

using json = nlohmann::ordered_json;

json to_json(const ModelParams& p);
json to_json(const LpsmParams& p);
ModelParams model_from_json(const json& j);
LpsmParams lpsm_from_json(const json& j);
bool looks_like_lpsm(const json& j);

json to_json(const Pmf& pmf);
Pmf pmf_from_json(const json& j);
std::string pmf_to_csv(const Pmf& pmf, int digits = 17);

json to_json(const lpsm::ModeReport& r);
json to_json(const limits::LimitLaw& law); // infinite moments serialize as "inf"
json to_json(const tail::TailExpansion& t);
json to_json(const sim::EnsembleSummary& s);
std::string ensemble_to_csv(const sim::EnsembleSummary& s);

std::string format_double(double v, int digits);

json envelope(const std::string& command, json parameters, json result, double wall_seconds);

} // namespace fluctuate::io
