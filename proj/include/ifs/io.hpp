// io.hpp — deterministic artifact outputs: CSV clouds, PPM/SVG renders,
// JSON reports, and atomic file writes.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ifs/affine.hpp"
#include "ifs/cloud.hpp"

namespace ifs {

// 17 significant digits; stable across runs.
std::string format_double(double v);

// Writes content to path via a temp file and rename.
void atomic_write(const std::string& path, const std::string& content);

// One point per row, comma-separated coordinates. Optional '#' header lines.
std::string cloud_csv(const PointCloud& c, const std::vector<std::string>& header_comments = {});

// Binary P6 raster of a 2D cloud over `box`, black points on white,
// splat radius one pixel.
std::string cloud_ppm(const PointCloud& c, const Box& box, int width = 1024, int height = 1024);

// SVG circles of radius eps in box coordinates.
std::string cloud_svg(const PointCloud& c, const Box& box);

std::string json_dump(const nlohmann::ordered_json& j);

}  // namespace ifs
