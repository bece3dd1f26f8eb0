#pragma once

#include <json.hpp>

#include "grushin/curves.hpp"
#include "grushin/distance.hpp"
#include "grushin/modulus.hpp"
#include "grushin/qc.hpp"

namespace grushin {

using nlohmann::json;

/// Every top-level JSON document carries "schema": 1.
inline constexpr int kSchemaVersion = 1;

json to_json(const Point& p);
json to_json(const Polyline& p);
json to_json(const DistanceResult& r);
json to_json(const DensityGrid& g);      // includes values (row-major)
json to_json(const ModulusResult& r);    // value/residual/iterations/grid
json to_json(const RectifiabilityReport& r);
json to_json(const CantorCurveResult& r);
json to_json(const DilatationReport& r);
json to_json(const std::vector<EtaSample>& profile);
json to_json(const DistortionReport& r);

/// Curve description records {label, family, parameters}.
json curve_spec_json(const std::string& label, const std::string& family,
                     const json& parameters);
json curve_spec_json(const CantorCurveSpec& spec);
/// Record for a member of the nonrectifiable family (plane or image version).
json nonrectifiable_spec_json(double a, Alpha alpha, bool image);

/// CSV with header "param,x1,x2", LF line endings, round-trip floats.
std::string polyline_csv(const Polyline& p);
Polyline polyline_from_csv(const std::string& text);

/// CSV heightmap with header "i,j,x1,x2,value" (cell centers), nx*ny rows.
std::string density_csv(const DensityGrid& g);

/// CSV with header "t_lo,t_hi,t_at_max,max_ratio,count".
std::string profile_csv(const std::vector<EtaSample>& profile);

std::string format_double(double v);  // shortest round-trip decimal

}  // namespace grushin
