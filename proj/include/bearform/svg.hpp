#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bearform/vec3.hpp"

namespace bearform {

// One curve of a 2D chart.
struct Series {
    std::string label;
    std::vector<double> t;
    std::vector<double> y;
    bool dashed = false;
};

struct PlotSpec {
    std::string title;
    std::string x_label = "t [s]";
    std::string y_label;
    bool log_y = false;
    int width = 860;
    int height = 540;
};

// Standalone SVG line chart. Rejects empty selections, series with fewer than
// two points, and nonpositive values under a log scale.
std::string render_line_chart(const std::vector<Series>& series, const PlotSpec& spec);

// One 3D path, drawn under a fixed orthographic projection.
struct Path3 {
    std::string label;
    std::vector<Vec3> points;
    bool dashed = false;
};

struct Plot3Spec {
    std::string title;
    double azimuth_deg = -55.0;
    double elevation_deg = 22.0;
    int width = 720;
    int height = 640;
    // straight segments drawn on top (e.g. sensing links at the final instant)
    std::vector<std::pair<Vec3, Vec3>> links;
};

std::string render_trajectories_3d(const std::vector<Path3>& paths, const Plot3Spec& spec);

} // namespace bearform
