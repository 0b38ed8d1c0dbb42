#include "duet/proxemics.hpp"

#include <array>
#include <cmath>

#include "duet/error.hpp"
#include "duet/rotation.hpp"

namespace duet::prox {

namespace {
constexpr double kPi = 3.14159265358979323846;

struct Sector {
  const char* name;
  int start_min;  // minutes past 12:00, range may wrap past 720
  int end_min;
};

// Clock sectors of the direction mapping table.
constexpr std::array<Sector, 8> kSectors{{
    {"front", 675, 765},       // 11:15 - 12:45 (wraps)
    {"front-right", 45, 135},  // 12:45 - 2:15
    {"right", 135, 225},       // 2:15 - 3:45
    {"back-right", 225, 315},  // 3:45 - 5:15
    {"back", 315, 405},        // 5:15 - 6:45
    {"back-left", 405, 495},   // 6:45 - 8:15
    {"left", 495, 585},        // 8:15 - 9:45
    {"front-left", 585, 675},  // 9:45 - 11:15
}};

const Sector& find_sector(const std::string& category) {
  for (const auto& s : kSectors)
    if (category == s.name) return s;
  fail(Err::UnknownCategory, "unknown direction category '" + category + "'");
}

ClockDirection clock_from_minutes(int m) {
  m = ((m % 720) + 720) % 720;
  int hour = m / 60;
  if (hour == 0) hour = 12;
  return {hour, m % 60};
}

bool minutes_in_sector(const Sector& s, int m) {
  m = ((m % 720) + 720) % 720;
  if (s.end_min <= 720) return m >= s.start_min && m <= s.end_min;
  // wrapping sector
  return m >= s.start_min || m <= s.end_min - 720;
}

}  // namespace

const char* to_string(Formation f) {
  switch (f) {
    case Formation::vis_a_vis: return "vis_a_vis";
    case Formation::l_shaped: return "l_shaped";
    case Formation::side_by_side: return "side_by_side";
  }
  return "vis_a_vis";
}

const char* to_string(DistanceBand b) {
  switch (b) {
    case DistanceBand::interpersonal: return "interpersonal";
    case DistanceBand::social: return "social";
    case DistanceBand::public_: return "public";
  }
  return "social";
}

Formation formation_from_string(const std::string& s) {
  if (s == "vis_a_vis") return Formation::vis_a_vis;
  if (s == "l_shaped") return Formation::l_shaped;
  if (s == "side_by_side") return Formation::side_by_side;
  fail(Err::UnknownCategory, "unknown positional configuration '" + s + "'");
}

DistanceBand band_from_string(const std::string& s) {
  if (s == "interpersonal") return DistanceBand::interpersonal;
  if (s == "social") return DistanceBand::social;
  if (s == "public") return DistanceBand::public_;
  fail(Err::UnknownCategory, "unknown distance category '" + s + "'");
}

DistanceRange band_range(DistanceBand b) {
  switch (b) {
    case DistanceBand::interpersonal: return {0.5, 0.7};
    case DistanceBand::social: return {0.7, 1.2};
    case DistanceBand::public_: return {1.2, 2.0};
  }
  return {0.7, 1.2};
}

double band_midpoint(DistanceBand b) {
  const auto r = band_range(b);
  return 0.5 * (r.min_m + r.max_m);
}

int clock_minutes(ClockDirection c) {
  if (c.hour < 1 || c.hour > 12 || c.minute < 0 || c.minute > 59)
    fail(Err::ValidationError, "clock value out of range");
  return (c.hour % 12) * 60 + c.minute;
}

double clock_to_angle(ClockDirection c) {
  const int m = clock_minutes(c);
  return rot::wrap_pi(-2.0 * kPi * static_cast<double>(m) / 720.0);
}

ClockDirection angle_to_clock(double angle) {
  double m = -angle * 720.0 / (2.0 * kPi);
  int mi = static_cast<int>(std::lround(m));
  return clock_from_minutes(mi);
}

std::pair<ClockDirection, ClockDirection> direction_range(const std::string& category) {
  const Sector& s = find_sector(category);
  return {clock_from_minutes(s.start_min), clock_from_minutes(s.end_min)};
}

bool in_direction_range(const std::string& category, ClockDirection c) {
  return minutes_in_sector(find_sector(category), clock_minutes(c));
}

bool angle_in_sector(const std::string& category, double angle) {
  return in_direction_range(category, angle_to_clock(angle));
}

std::string sector_of_angle(double angle) {
  const int m = ((static_cast<int>(std::lround(-angle * 720.0 / (2.0 * kPi))) % 720) +
                 720) % 720;
  for (const auto& s : kSectors) {
    const int center = ((s.start_min + s.end_min) / 2) % 720;
    int d = std::abs(m - center);
    d = std::min(d, 720 - d);
    if (d <= 45) return s.name;
  }
  return "front";
}

WorldPose compute_global_pose(const WorldPose& pose_a, const RelativeSpatial& rel) {
  WorldPose out;
  const double bearing = pose_a.heading + rel.theta;
  out.position = {pose_a.position.x + rel.distance * std::cos(bearing),
                  pose_a.position.y + rel.distance * std::sin(bearing)};
  out.heading = rot::wrap_pi(pose_a.heading + rel.theta + kPi - rel.phi);
  return out;
}

bool validate_configuration(Formation f, const RelativeSpatial& rel) {
  const ClockDirection ct = angle_to_clock(rel.theta);
  const ClockDirection cp = angle_to_clock(rel.phi);
  auto in = [&](const char* cat, ClockDirection c) { return in_direction_range(cat, c); };
  switch (f) {
    case Formation::vis_a_vis:
      return in("front", ct) && in("front", cp);
    case Formation::l_shaped: {
      // front-left pairs with front-right or right (and the mirrored rule);
      // accepted in both argument orders so the check is swap-symmetric.
      auto one_way = [&](ClockDirection a, ClockDirection b) {
        return (in("front-left", a) && (in("front-right", b) || in("right", b))) ||
               (in("front-right", a) && (in("front-left", b) || in("left", b)));
      };
      return one_way(ct, cp) || one_way(cp, ct);
    }
    case Formation::side_by_side:
      return (in("left", ct) && in("right", cp)) || (in("right", ct) && in("left", cp));
  }
  return false;
}

RelativeSpatial relative_from_world(const WorldPose& pose_a, const WorldPose& pose_b) {
  const Vec2 d = pose_b.position - pose_a.position;
  const double dist = d.norm();
  if (dist < 1e-9)
    fail(Err::DegeneratePositions, "characters occupy the same position");
  RelativeSpatial rel;
  rel.distance = dist;
  rel.theta = rot::wrap_pi(std::atan2(d.y, d.x) - pose_a.heading);
  rel.phi = rot::wrap_pi(pose_a.heading + rel.theta + kPi - pose_b.heading);
  return rel;
}

Vec2 displacement_to_world(double heading, double move_angle_deg, double move_dist_m) {
  if (move_dist_m < 0.0) fail(Err::InvalidDistance, "movement distance must be >= 0");
  // 0 deg is the character's forward; angles grow clockwise.
  const double a = heading - move_angle_deg * kPi / 180.0;
  return {move_dist_m * std::cos(a), move_dist_m * std::sin(a)};
}

}  // namespace duet::prox
