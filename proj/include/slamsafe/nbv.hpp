#pragma once

#include "slamsafe/world.hpp"

namespace slamsafe {

// Next-best-view localization-quality heuristic: candidate poses are scored
// by how well the currently visible landmarks support re-localization.
struct NBVQualityModel {
    double min_triangulation_angle{deg_to_rad(5.0)};  // GPQ saturates here
    double viewing_falloff{deg_to_rad(20.0)};         // incidence-difference width
    double scale_tolerance{2.0};                      // distance ratio with full credit
};

// Mean over landmarks visible from p_next of GPQ * PRP, in [0, 1]:
//   GPQ  — triangulation angle subtended at the landmark by the p_prev ->
//          p_next baseline, clamped to 1 at min_triangulation_angle;
//   PRP  — Gaussian falloff in the difference of the two incidence angles
//          (viewing direction vs. landmark normal), times a scale factor
//          that stays 1 while the viewing-distance ratio is within
//          scale_tolerance and shrinks proportionally beyond it.
// An empty visible set scores 0.
double nbv_quality(const WorldMap& map, const CameraModel& cam, const NBVQualityModel& model,
                   const Pose& p_prev, const Pose& p_next);

}  // namespace slamsafe
