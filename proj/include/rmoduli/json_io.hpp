#pragma once

#include <json.hpp>

#include "rmoduli/canonical.hpp"
#include "rmoduli/oplanar.hpp"

namespace rmoduli {

using json = nlohmann::json;

json tree_to_json(const OPlanarTree& t);
OPlanarTree tree_from_json(const json& j);

json class_to_json(const UPlanarClass& c);
UPlanarClass class_from_json(const json& j);

}  // namespace rmoduli
