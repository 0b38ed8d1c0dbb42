#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "duet/mat.hpp"
#include "duet/motion.hpp"
#include "duet/signals.hpp"
#include "duet/transcript.hpp"

namespace duet {

/// Masked trajectory target on one channel group. targets and mask are
/// (round frames x selector width); mask entries are 0 or 1 and masked-out
/// target entries are ignored.
struct TrajectoryConstraint {
  std::string group;  // root_position | root_rotation | head_rotation
  std::vector<int> selector;
  Mat targets;
  Mat mask;
};

/// Similarity target: replace the selected channels of the denoised motion
/// with `target` while the diffusion timestep is above T - cutoff_step.
struct SimilarityConstraint {
  Mat target;  // round frames x frame width
  std::vector<int> selector;
  int cutoff_step = 200;
};

struct ConstraintSet {
  std::vector<TrajectoryConstraint> trajectory;
  std::optional<SimilarityConstraint> similarity;
  std::optional<MotionState> next_state;

  bool empty() const { return trajectory.empty() && !similarity && !next_state; }
  const TrajectoryConstraint* find(const std::string& group) const;
  void validate(std::size_t frames, std::size_t width) const;  // InvalidConstraint
};

struct NodParams {
  double amplitude_rad = 0.26;
  double frequency_hz = 2.0;
  double duration_s = 1.0;
};

/// Start time of the first case-insensitive occurrence of `word` inside the
/// window. TriggerWordNotFound otherwise.
double resolve_word_timestamp(const std::string& word,
                              const std::vector<TranscriptWord>& words,
                              double window_start, double window_end);

/// Sinusoidal pitch target on the head joint: A*sin(2*pi*f*(t-onset)) over
/// [onset, onset+duration], truncated at the window end.
TrajectoryConstraint nod_trajectory(double onset_s, const SkeletonConfig& skeleton,
                                    const NodParams& nod, double window_start_s,
                                    int frames);

/// Head yaw/pitch targets that face the partner's head for the gaze interval.
/// Head positions are root positions lifted by per-state offsets.
TrajectoryConstraint gaze_trajectory(const WorldPose& own, double own_head_z,
                                     const WorldPose& partner, double partner_head_z,
                                     double onset_s, double duration_s,
                                     const SkeletonConfig& skeleton,
                                     double window_start_s, int frames);

/// Linear root position/heading interpolation from the current pose to
/// (pose + dp, heading + dheading); the heading moves along the shorter arc.
std::vector<TrajectoryConstraint> root_targets(const WorldPose& current,
                                               double current_z, Vec2 dp,
                                               double dheading, int frames,
                                               const SkeletonConfig& skeleton);

/// Similarity target from the initiator's segment: upper-body channels are
/// shifted so the imitated motion starts at onset; all other channels hold
/// the responder's previous last frame. MissingSource without an initiator
/// segment of round length.
SimilarityConstraint imitation_constraint(const MotionSegment& initiator_segment,
                                          double onset_s,
                                          const MotionSegment& responder_prev,
                                          const SkeletonConfig& skeleton,
                                          double window_start_s, int frames,
                                          int cutoff_step);

/// Everything the compiler needs to know about the round.
struct CompileContext {
  SkeletonConfig skeleton;
  std::array<WorldPose, 2> poses;
  std::array<double, 2> root_z{0.0, 0.0};
  std::array<MotionState, 2> states{MotionState::stand, MotionState::stand};
  std::array<const MotionSegment*, 2> prev_segments{nullptr, nullptr};
  std::vector<TranscriptWord> words;
  double window_start_s = 0.0;
  double window_end_s = 5.0;
  int frames = 150;
  double fps = 30.0;
  NodParams nod;
  double head_offset_stand_m = 1.6;
  double head_offset_sit_m = 1.2;
  int similarity_cutoff = 200;

  double head_z(CharacterId c) const;
};

/// Compiles a validated signal set into per-character constraint sets.
/// Deterministic; next_state is walk exactly when a root_position constraint
/// was produced. Sub-operation errors carry the originating signal.
std::array<ConstraintSet, 2> compile_signals(const InteractionSignalSet& signals,
                                             const CompileContext& ctx);

/// Stable JSON form used for golden files and debugging.
nlohmann::ordered_json constraint_set_to_json(const ConstraintSet& cs);

}  // namespace duet
