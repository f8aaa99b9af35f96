#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "workdyn/dissimilarity.hpp"
#include "workdyn/integrate.hpp"

namespace workdyn {

enum class Component { U, V, W };

enum class PlotKind { TimeseriesOverlay, PhasePortrait2D, PhasePortrait3DProjection };

struct PlotSpec {
    PlotKind kind{PlotKind::TimeseriesOverlay};
    std::vector<Component> components{Component::V, Component::W};
    // 3d projection only: the coordinate pair drawn; the remaining component
    // drives stroke opacity.
    std::array<Component, 2> projection{Component::V, Component::W};
    std::string title;
    std::string x_label;
    std::string y_label;

    void validate() const;
};

/// "t,u,v,w" header plus one full-precision row per sample; the decimal
/// representations round-trip to the exact binary values.
std::string trajectory_csv(const Trajectory& traj);

/// Strict inverse of trajectory_csv (params are not carried by the CSV).
Trajectory trajectory_from_csv(std::string_view text);

/// Header line "n,r,normalized" with values, then dense row-major
/// "i,j,value" rows.
std::string matrix_csv(const DissimilarityMatrix& matrix);

std::string series_csv(const DissimilaritySeries& series);

/// Self-contained SVG 1.1 document. Axis ranges are min-max autoscaled with
/// 5% margins; 2d portraits use an equal-aspect mapping; the 3d projection is
/// orthographic onto the chosen pair with the third component mapped to
/// stroke opacity.
std::string render_svg(const Trajectory& traj, const PlotSpec& spec);

}  // namespace workdyn
