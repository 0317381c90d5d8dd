#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "contactlab/bounds.hpp"
#include "contactlab/spec.hpp"

namespace contactlab {

struct RefValue {
    double value = 0.0;
    std::string provenance;  // exact | derived | reported
    std::string text;        // for non-numeric references such as verdicts
};

struct CatalogEntry {
    std::string name;
    std::string description;
    std::string document;  // JSON spec document
    ManifoldSpec spec;
    std::map<std::string, RefValue> reference;
    std::map<std::string, double> inputs;  // bound inputs beyond the known block (e.g. A)
    Region region;                         // default region for global estimates
    Grid grid;
    DistanceFn distance;                           // closed-form distance where available
    std::function<Vec4(const Vec3&)> ambient;      // S³ charts: point of the unit sphere in R⁴
};

std::vector<std::string> catalog_list();
// constants overrides the entry's constants (e.g. {"k", 3}).
CatalogEntry catalog_get(const std::string& name, const std::map<std::string, double>& constants = {});
std::string catalog_export(const std::string& name, const std::map<std::string, double>& constants = {});

}  // namespace contactlab
