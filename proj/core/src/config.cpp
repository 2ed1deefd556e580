#include "domlab/config.hpp"

namespace domlab {

RunConfig parse_config(const nlohmann::ordered_json&) { return {}; }
nlohmann::ordered_json config_to_json(const RunConfig&) { return {}; }
RunConfig load_config_file(const std::string&) { return {}; }
int default_grid_resolution(int dim) { return dim <= 3 ? 64 : 16; }
int default_cone_grid_resolution(int dim) { return dim <= 3 ? 16 : 8; }

}  // namespace domlab
