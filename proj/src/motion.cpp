#include "duet/motion.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "duet/error.hpp"

namespace duet {

const char* to_string(MotionState s) {
  switch (s) {
    case MotionState::stand: return "stand";
    case MotionState::walk: return "walk";
    case MotionState::sit: return "sit";
  }
  return "stand";
}

const char* to_string(CharacterId c) { return c == CharacterId::I ? "I" : "II"; }

MotionState motion_state_from_string(const std::string& s) {
  if (s == "stand") return MotionState::stand;
  if (s == "walk") return MotionState::walk;
  if (s == "sit") return MotionState::sit;
  fail(Err::ValidationError, "unknown motion state '" + s + "'");
}

CharacterId other(CharacterId c) {
  return c == CharacterId::I ? CharacterId::II : CharacterId::I;
}

bool SkeletonConfig::has_group(const std::string& name) const {
  return named_groups.find(name) != named_groups.end();
}

const std::vector<int>& SkeletonConfig::group(const std::string& name) const {
  auto it = named_groups.find(name);
  if (it == named_groups.end()) fail(Err::MissingGroup, "no channel group '" + name + "'");
  return it->second;
}

void SkeletonConfig::validate() const {
  if (joint_names.empty()) fail(Err::ValidationError, "skeleton has no joints");
  if (joint_dim != 3) fail(Err::ValidationError, "joint_dim must be 3 (exponential map)");
  if (root_dim != 6) fail(Err::ValidationError, "root_dim must be 6 (position+velocity)");
  if (fps <= 0) fail(Err::ValidationError, "fps must be positive");
  const int width = frame_width();
  for (const auto& [name, idx] : named_groups) {
    for (int i : idx)
      if (i < 0 || i >= width)
        fail(Err::ValidationError, "group '" + name + "' index out of frame");
  }
  // root_position and root_rotation must not share channels; the head and
  // upper-body groups are allowed to overlap.
  if (has_group("root_position") && has_group("root_rotation")) {
    std::set<int> pos(group("root_position").begin(), group("root_position").end());
    for (int i : group("root_rotation"))
      if (pos.count(i))
        fail(Err::ValidationError, "root_position/root_rotation groups overlap");
  }
  if (!parents.empty()) {
    if (parents.size() != joint_names.size() || offsets_m.size() != joint_names.size())
      fail(Err::ValidationError, "hierarchy arrays must match joint count");
    for (std::size_t j = 0; j < parents.size(); ++j)
      if (parents[j] >= static_cast<int>(j))
        fail(Err::ValidationError, "parents must precede children");
  }
}

Mat extract(const Mat& frames, const std::vector<int>& selector, kern::Exec exec) {
  Mat out;
  kern::gather(frames, selector, out, exec);
  return out;
}

Mat extract(const MotionSegment& seg, const std::vector<int>& selector, kern::Exec exec) {
  return extract(seg.frames, selector, exec);
}

Mat extract_adjoint(const Mat& values, const std::vector<int>& selector,
                    std::size_t width, kern::Exec exec) {
  Mat out;
  kern::scatter(values, selector, width, out, exec);
  return out;
}

Mat velocities(const Mat& frames, const std::vector<int>& selector, kern::Exec exec) {
  if (frames.rows < 2) fail(Err::TooShort, "velocities need at least 2 frames");
  Mat sel = extract(frames, selector, exec);
  Mat out(sel.rows - 1, sel.cols);
  const long long rows = static_cast<long long>(out.rows);
  kern::parallel_for(
      static_cast<std::size_t>(rows),
      [&](std::size_t r) {
        for (std::size_t c = 0; c < sel.cols; ++c)
          out(r, c) = sel(r + 1, c) - sel(r, c);
      },
      exec);
  return out;
}

Mat velocities(const MotionSegment& seg, const std::vector<int>& selector,
               kern::Exec exec) {
  return velocities(seg.frames, selector, exec);
}

rot::YawPitch head_orientation(const double* frame, const SkeletonConfig& skeleton) {
  const auto& head = skeleton.group("head_rotation");
  if (head.size() != 3) fail(Err::MissingGroup, "head_rotation group must have 3 channels");
  rot::Vec3 r{frame[head[0]], frame[head[1]], frame[head[2]]};
  return rot::yaw_pitch_from_matrix(rot::expmap_to_matrix(r));
}

rot::YawPitch head_orientation(const MotionSegment& seg, std::size_t frame_index,
                               const SkeletonConfig& skeleton) {
  return head_orientation(seg.frames.row(frame_index), skeleton);
}

WorldPose pose_from_frame(const double* frame, const SkeletonConfig& skeleton) {
  WorldPose pose;
  pose.position = {frame[skeleton.root_position_channel(0)],
                   frame[skeleton.root_position_channel(1)]};
  const auto& rr = skeleton.group("root_rotation");
  rot::Vec3 r{frame[rr[0]], frame[rr[1]], frame[rr[2]]};
  pose.heading = rot::yaw_pitch_from_matrix(rot::expmap_to_matrix(r)).yaw;
  return pose;
}

static MotionSegment transform_world(const MotionSegment& seg,
                                     const SkeletonConfig& skeleton,
                                     const WorldPose& base, bool inverse) {
  if (seg.frames.cols != static_cast<std::size_t>(skeleton.frame_width()))
    fail(Err::SkeletonMismatch, "segment width does not match skeleton");
  MotionSegment out = seg;
  const double h = inverse ? -base.heading : base.heading;
  const double c = std::cos(h), s = std::sin(h);
  const int px = skeleton.root_position_channel(0);
  const int py = skeleton.root_position_channel(1);
  const int vx = skeleton.root_velocity_channel(0);
  const int vy = skeleton.root_velocity_channel(1);
  const auto& rr = skeleton.group("root_rotation");
  const rot::Mat3 rz = rot::rot_z(h);
  for (std::size_t t = 0; t < out.frames.rows; ++t) {
    double* f = out.frames.row(t);
    double x = f[px], y = f[py];
    if (inverse) {
      x -= base.position.x;
      y -= base.position.y;
    }
    const double xr = c * x - s * y;
    const double yr = s * x + c * y;
    f[px] = xr + (inverse ? 0.0 : base.position.x);
    f[py] = yr + (inverse ? 0.0 : base.position.y);
    const double wx = c * f[vx] - s * f[vy];
    const double wy = s * f[vx] + c * f[vy];
    f[vx] = wx;
    f[vy] = wy;
    // The root joint carries world orientation: compose the base heading.
    rot::Vec3 r{f[rr[0]], f[rr[1]], f[rr[2]]};
    const rot::Vec3 rw = rot::matrix_to_expmap(rot::mul(rz, rot::expmap_to_matrix(r)));
    f[rr[0]] = rw[0];
    f[rr[1]] = rw[1];
    f[rr[2]] = rw[2];
  }
  return out;
}

MotionSegment to_world(const MotionSegment& seg, const SkeletonConfig& skeleton,
                       const WorldPose& base) {
  return transform_world(seg, skeleton, base, false);
}

MotionSegment from_world(const MotionSegment& seg, const SkeletonConfig& skeleton,
                         const WorldPose& base) {
  return transform_world(seg, skeleton, base, true);
}

}  // namespace duet
