#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "linfty/core.hpp"
#include "linfty/solver2d.hpp"

namespace linfty::io {

using nlohmann::json;

// PiecewiseQuadratic <-> {domain:[a,b], breakpoints:[...], pieces:[[c0,c1,c2],...]}
json to_json(const PiecewiseQuadratic& pq);
PiecewiseQuadratic piecewise_quadratic_from_json(const json& j);

// ScalarField <-> {dimension, shape, spacing, origin, values}
json to_json(const ScalarField& f);
ScalarField scalar_field_from_json(const json& j);

json to_json(const SolveReport& r);
json to_json(const solver2d::InterfaceMetrics& m);

/// Grid dump: one row per grid line, comma separated, '.' decimal,
/// shortest round-trip formatting. 1D fields produce a single row.
std::string to_csv(const ScalarField& f);
ScalarField scalar_field_from_csv(const std::string& text, double spacing, double origin0,
                                  double origin1 = 0.0);

/// Deterministic double formatting shared by all writers.
std::string format_double(double v);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

}  // namespace linfty::io
