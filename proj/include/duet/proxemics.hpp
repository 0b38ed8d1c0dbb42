#pragma once

#include <string>
#include <utility>

#include "duet/mat.hpp"
#include "duet/motion.hpp"

// Deterministic spatial math behind scene planning: F-formation categories,
// clock-based bearings, distance bands, and global pose computation.
namespace duet::prox {

enum class Formation { vis_a_vis, l_shaped, side_by_side };
enum class DistanceBand { interpersonal, social, public_ };

const char* to_string(Formation f);
const char* to_string(DistanceBand b);
Formation formation_from_string(const std::string& s);    // UnknownCategory
DistanceBand band_from_string(const std::string& s);      // UnknownCategory

struct DistanceRange {
  double min_m;
  double max_m;
};

/// Fixed band ranges: interpersonal [0.5, 0.7], social [0.7, 1.2],
/// public [1.2, 2.0] meters.
DistanceRange band_range(DistanceBand b);
double band_midpoint(DistanceBand b);

/// Clock bearing; 12:00 means directly ahead, hours run clockwise.
struct ClockDirection {
  int hour = 12;   // 1..12
  int minute = 0;  // 0..59
};

/// Minutes past 12:00 on one revolution, in [0, 720).
int clock_minutes(ClockDirection c);

/// Clockwise clock reading to counterclockwise radians in (-pi, pi];
/// 12:00 -> 0, 3:00 -> -pi/2, 9:00 -> +pi/2.
double clock_to_angle(ClockDirection c);
ClockDirection angle_to_clock(double angle);

/// Clock range of a named sector (front, front-right, right, back-right,
/// back, back-left, left, front-left). UnknownCategory otherwise.
std::pair<ClockDirection, ClockDirection> direction_range(const std::string& category);
bool in_direction_range(const std::string& category, ClockDirection c);
bool angle_in_sector(const std::string& category, double angle);

/// Name of the sector whose center is nearest to the bearing.
std::string sector_of_angle(double angle);

/// Mutual planar arrangement: theta is the bearing of II in I's frame, phi
/// the bearing of I in II's frame, both in (-pi, pi]; distance in meters.
struct RelativeSpatial {
  double theta = 0.0;
  double phi = 0.0;
  double distance = 1.0;
};

/// p_II = p_I + d*[cos(a_I+theta), sin(a_I+theta)], a_II = a_I+theta+pi-phi.
WorldPose compute_global_pose(const WorldPose& pose_a, const RelativeSpatial& rel);

/// True iff both bearings fall inside the clock sectors the mapping rules
/// assign to the formation; symmetric under swapping the characters.
bool validate_configuration(Formation f, const RelativeSpatial& rel);

/// Inverse of compute_global_pose. DegeneratePositions on coincident points.
RelativeSpatial relative_from_world(const WorldPose& pose_a, const WorldPose& pose_b);

/// Character-frame movement (0 deg = forward, clockwise-positive) to a world
/// displacement. InvalidDistance when dist < 0.
Vec2 displacement_to_world(double heading, double move_angle_deg, double move_dist_m);

}  // namespace duet::prox
