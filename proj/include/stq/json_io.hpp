#pragma once

#include <string>

#include "json.hpp"
#include "stq/pdm.hpp"
#include "stq/process.hpp"
#include "stq/twotime.hpp"

namespace stq {

using json = nlohmann::json;

// Matrix encoding: {"rows": r, "cols": c, "data": [[re, im], ...]} row-major.
json to_json(const CMat& m);
CMat matrix_from_json(const json& j);

json to_json(const Channel& ch);
Channel channel_from_json(const json& j);

json to_json(const Instrument& inst);
Instrument instrument_from_json(const json& j);

json to_json(const Pdm& r);
Pdm pdm_from_json(const json& j);

json to_json(const PureTwoTimeState& s);
PureTwoTimeState state_from_json(const json& j);

json to_json(const TwoTimeEnsemble& e);
TwoTimeEnsemble ensemble_from_json(const json& j);

json to_json(const ProcessMatrix& w);
ProcessMatrix process_from_json(const json& j);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

}  // namespace stq
