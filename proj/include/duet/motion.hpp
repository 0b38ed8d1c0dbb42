#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "duet/kernels.hpp"
#include "duet/mat.hpp"
#include "duet/rotation.hpp"

namespace duet {

enum class MotionState { stand, walk, sit };
enum class CharacterId { I = 0, II = 1 };

const char* to_string(MotionState s);
const char* to_string(CharacterId c);
MotionState motion_state_from_string(const std::string& s);
CharacterId other(CharacterId c);

/// Skeleton layout: J joints of Q=3 exponential-map channels followed by the
/// global root block (3 position channels in meters, 3 velocity channels in
/// meters/frame). Channel groups are index lists into one frame.
struct SkeletonConfig {
  std::vector<std::string> joint_names;
  int joint_dim = 3;
  int root_dim = 6;
  double fps = 30.0;
  std::map<std::string, std::vector<int>> named_groups;

  // Optional hierarchy used only by BVH export.
  std::vector<int> parents;  // -1 for the root joint
  std::vector<std::array<double, 3>> offsets_m;

  int joint_count() const { return static_cast<int>(joint_names.size()); }
  int frame_width() const { return joint_count() * joint_dim + root_dim; }
  int joint_channel(int joint, int axis) const { return joint * joint_dim + axis; }
  int root_position_channel(int axis) const { return joint_count() * joint_dim + axis; }
  int root_velocity_channel(int axis) const {
    return joint_count() * joint_dim + 3 + axis;
  }

  bool has_group(const std::string& name) const;
  const std::vector<int>& group(const std::string& name) const;  // MissingGroup
  void validate() const;
};

/// Planar world placement of a character: 2-D position in meters plus a
/// counterclockwise heading wrapped to (-pi, pi].
struct WorldPose {
  Vec2 position;
  double heading = 0.0;
};

struct MotionSegment {
  Mat frames;  // K x frame_width
  CharacterId character = CharacterId::I;
  int round_index = 0;

  std::size_t frame_count() const { return frames.rows; }
};

// --- extraction operators -------------------------------------------------

Mat extract(const Mat& frames, const std::vector<int>& selector,
            kern::Exec exec = kern::default_exec());
Mat extract(const MotionSegment& seg, const std::vector<int>& selector,
            kern::Exec exec = kern::default_exec());

Mat extract_adjoint(const Mat& values, const std::vector<int>& selector,
                    std::size_t width, kern::Exec exec = kern::default_exec());

/// Frame-to-frame differences of the selected channels; rows-1 outputs.
Mat velocities(const Mat& frames, const std::vector<int>& selector,
               kern::Exec exec = kern::default_exec());
Mat velocities(const MotionSegment& seg, const std::vector<int>& selector,
               kern::Exec exec = kern::default_exec());

// --- kinematic helpers ----------------------------------------------------

/// Yaw/pitch of the head joint's exponential map (yaw-then-pitch order,
/// positive pitch tilts downward; roll discarded).
rot::YawPitch head_orientation(const double* frame, const SkeletonConfig& skeleton);
rot::YawPitch head_orientation(const MotionSegment& seg, std::size_t frame_index,
                               const SkeletonConfig& skeleton);

/// Planar pose read from a frame: root xy position plus the yaw of the root
/// rotation joint.
WorldPose pose_from_frame(const double* frame, const SkeletonConfig& skeleton);

/// Rigidly place a clip-normalized segment into the world: root positions are
/// rotated by base.heading and translated by base.position, root velocities
/// rotated, and base.heading is composed into the root joint orientation so
/// the stored yaw stays the world heading. Other joints are local and remain
/// untouched.
MotionSegment to_world(const MotionSegment& seg, const SkeletonConfig& skeleton,
                       const WorldPose& base);

/// Inverse of to_world.
MotionSegment from_world(const MotionSegment& seg, const SkeletonConfig& skeleton,
                         const WorldPose& base);

}  // namespace duet
