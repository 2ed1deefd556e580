#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "domlab/map.hpp"

namespace domlab {

// Analytically known quantity attached to a catalog system, e.g. an exact
// expansion exponent.  origin records how the value is known.
struct KnownFact {
  std::string name;
  double value;
  std::string origin;
};

struct ParamSpec {
  std::string name;
  double default_value;
  double min;
  double max;
};

struct CatalogEntry {
  std::string id;
  std::string description;
  int dim;
  int dim_cu;  // designated expanding-bundle dimension for default analyses
  std::vector<ParamSpec> params;
  std::vector<KnownFact> facts;
  std::function<MapPtr(const std::map<std::string, double>&)> build;

  double fact(const std::string& name) const;  // throws UnknownIdentifier
};

const std::vector<CatalogEntry>& catalog();

// Throws UnknownIdentifier for ids not in the catalog.
const CatalogEntry& catalog_entry(const std::string& id);

// Builds the system with defaults overridden by the given parameters.
// Unknown parameter names and out-of-range values are rejected.
MapPtr make_system(const std::string& id,
                   const std::map<std::string, double>& overrides = {});

}  // namespace domlab
