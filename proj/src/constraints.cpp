#include "duet/constraints.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "duet/error.hpp"
#include "duet/rotation.hpp"

namespace duet {

namespace {

bool iequals(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

int frame_of_time(double t, double window_start_s, double fps, int frames) {
  const int f = static_cast<int>(std::lround((t - window_start_s) * fps));
  return std::clamp(f, 0, frames - 1);
}

}  // namespace

const TrajectoryConstraint* ConstraintSet::find(const std::string& group) const {
  for (const auto& c : trajectory)
    if (c.group == group) return &c;
  return nullptr;
}

void ConstraintSet::validate(std::size_t frames, std::size_t width) const {
  std::vector<std::string> seen;
  for (const auto& c : trajectory) {
    if (std::find(seen.begin(), seen.end(), c.group) != seen.end())
      fail(Err::InvalidConstraint, "duplicate constraint group '" + c.group + "'");
    seen.push_back(c.group);
    if (!c.targets.same_shape(c.mask))
      fail(Err::InvalidConstraint, "targets/mask shape mismatch in '" + c.group + "'");
    if (c.targets.rows != frames || c.targets.cols != c.selector.size())
      fail(Err::InvalidConstraint, "constraint shape off for '" + c.group + "'");
    for (int idx : c.selector)
      if (idx < 0 || static_cast<std::size_t>(idx) >= width)
        fail(Err::InvalidConstraint, "selector out of range in '" + c.group + "'");
    for (double m : c.mask.data)
      if (m != 0.0 && m != 1.0)
        fail(Err::InvalidConstraint, "mask must be binary in '" + c.group + "'");
  }
  if (similarity) {
    if (similarity->target.rows != frames || similarity->target.cols != width)
      fail(Err::InvalidConstraint, "similarity target shape mismatch");
  }
}

double CompileContext::head_z(CharacterId c) const {
  const int i = static_cast<int>(c);
  const double off =
      states[i] == MotionState::sit ? head_offset_sit_m : head_offset_stand_m;
  return root_z[i] + off;
}

double resolve_word_timestamp(const std::string& word,
                              const std::vector<TranscriptWord>& words,
                              double window_start, double window_end) {
  for (const auto& w : words) {
    if (w.start < window_start || w.start >= window_end) continue;
    if (iequals(w.word, word)) return w.start;
  }
  fail(Err::TriggerWordNotFound,
       "'" + word + "' not spoken in [" + std::to_string(window_start) + ", " +
           std::to_string(window_end) + ")");
}

TrajectoryConstraint nod_trajectory(double onset_s, const SkeletonConfig& skeleton,
                                    const NodParams& nod, double window_start_s,
                                    int frames) {
  const auto& head = skeleton.group("head_rotation");
  TrajectoryConstraint c;
  c.group = "head_rotation";
  c.selector = {head[1]};  // pitch component of the exponential map
  c.targets = Mat(frames, 1);
  c.mask = Mat(frames, 1);
  const double fps = skeleton.fps;
  const double end_s = onset_s + nod.duration_s;
  for (int f = 0; f < frames; ++f) {
    const double t = window_start_s + static_cast<double>(f) / fps;
    if (t >= onset_s - 1e-9 && t <= end_s + 1e-9) {
      c.targets(f, 0) = nod.amplitude_rad *
                        std::sin(2.0 * M_PI * nod.frequency_hz * (t - onset_s));
      c.mask(f, 0) = 1.0;
    }
  }
  return c;
}

TrajectoryConstraint gaze_trajectory(const WorldPose& own, double own_head_z,
                                     const WorldPose& partner, double partner_head_z,
                                     double onset_s, double duration_s,
                                     const SkeletonConfig& skeleton,
                                     double window_start_s, int frames) {
  if (!(duration_s > 0.0)) fail(Err::ValidationError, "gaze duration must be positive");
  const Vec2 d = partner.position - own.position;
  const double horiz = d.norm();
  const double dz = partner_head_z - own_head_z;
  if (horiz < 1e-9 && std::abs(dz) < 1e-9)
    fail(Err::DegeneratePositions, "gaze source and target heads coincide");
  const double yaw = rot::wrap_pi(std::atan2(d.y, d.x) - own.heading);
  // Positive pitch tilts down; a higher partner head gives negative pitch.
  const double pitch = -std::atan2(dz, horiz);
  const rot::Vec3 target = rot::yaw_pitch_to_expmap(yaw, pitch);

  const auto& head = skeleton.group("head_rotation");
  TrajectoryConstraint c;
  c.group = "head_rotation";
  c.selector = {head[1], head[2]};  // pitch, yaw components
  c.targets = Mat(frames, 2);
  c.mask = Mat(frames, 2);
  const double fps = skeleton.fps;
  for (int f = 0; f < frames; ++f) {
    const double t = window_start_s + static_cast<double>(f) / fps;
    if (t >= onset_s - 1e-9 && t <= onset_s + duration_s + 1e-9) {
      c.targets(f, 0) = target[1];
      c.targets(f, 1) = target[2];
      c.mask(f, 0) = 1.0;
      c.mask(f, 1) = 1.0;
    }
  }
  return c;
}

std::vector<TrajectoryConstraint> root_targets(const WorldPose& current,
                                               double current_z, Vec2 dp,
                                               double dheading, int frames,
                                               const SkeletonConfig& skeleton) {
  if (frames < 2) fail(Err::InvalidConstraint, "root targets need >= 2 frames");
  std::vector<TrajectoryConstraint> out;

  TrajectoryConstraint pos;
  pos.group = "root_position";
  pos.selector = {skeleton.root_position_channel(0), skeleton.root_position_channel(1),
                  skeleton.root_position_channel(2)};
  pos.targets = Mat(frames, 3);
  pos.mask = Mat(frames, 3, 1.0);

  TrajectoryConstraint rotc;
  rotc.group = "root_rotation";
  const auto& rr = skeleton.group("root_rotation");
  rotc.selector = rr;
  rotc.targets = Mat(frames, 3);
  rotc.mask = Mat(frames, 3, 1.0);

  const double dh = rot::wrap_pi(dheading);  // shorter arc
  for (int f = 0; f < frames; ++f) {
    const double s = static_cast<double>(f) / static_cast<double>(frames - 1);
    pos.targets(f, 0) = current.position.x + s * dp.x;
    pos.targets(f, 1) = current.position.y + s * dp.y;
    pos.targets(f, 2) = current_z;
    const double h = rot::wrap_pi(current.heading + s * dh);
    const rot::Vec3 r = rot::matrix_to_expmap(rot::rot_z(h));
    rotc.targets(f, 0) = r[0];
    rotc.targets(f, 1) = r[1];
    rotc.targets(f, 2) = r[2];
  }
  out.push_back(std::move(pos));
  out.push_back(std::move(rotc));
  return out;
}

SimilarityConstraint imitation_constraint(const MotionSegment& initiator_segment,
                                          double onset_s,
                                          const MotionSegment& responder_prev,
                                          const SkeletonConfig& skeleton,
                                          double window_start_s, int frames,
                                          int cutoff_step) {
  const std::size_t width = skeleton.frame_width();
  if (initiator_segment.frames.rows < static_cast<std::size_t>(frames) ||
      initiator_segment.frames.cols != width)
    fail(Err::MissingSource, "initiator motion does not cover the round");
  if (responder_prev.frames.rows == 0 || responder_prev.frames.cols != width)
    fail(Err::MissingSource, "responder has no previous motion");

  const auto& upper = skeleton.group("upper_body");
  std::vector<char> is_upper(width, 0);
  for (int idx : upper) is_upper[static_cast<std::size_t>(idx)] = 1;

  const int onset_frame =
      frame_of_time(onset_s, window_start_s, skeleton.fps, frames);
  const double* hold = responder_prev.frames.row(responder_prev.frames.rows - 1);

  SimilarityConstraint sc;
  sc.selector = upper;
  sc.cutoff_step = cutoff_step;
  sc.target = Mat(frames, width);
  for (int f = 0; f < frames; ++f) {
    double* row = sc.target.row(f);
    const double* src =
        f >= onset_frame ? initiator_segment.frames.row(f - onset_frame) : nullptr;
    for (std::size_t c = 0; c < width; ++c) {
      if (is_upper[c] && src != nullptr)
        row[c] = src[c];
      else
        row[c] = hold[c];
    }
  }
  return sc;
}

namespace {

// Merge a nod pitch track into an existing head constraint (gaze), adding on
// overlapping frames and extending the mask elsewhere.
void merge_nod_into_head(TrajectoryConstraint& head, const TrajectoryConstraint& nod) {
  for (std::size_t f = 0; f < head.targets.rows; ++f) {
    if (nod.mask(f, 0) == 0.0) continue;
    if (head.mask(f, 0) == 1.0)
      head.targets(f, 0) += nod.targets(f, 0);
    else {
      head.targets(f, 0) = nod.targets(f, 0);
      head.mask(f, 0) = 1.0;
    }
  }
}

[[noreturn]] void rethrow_with_provenance(const Error& e, CharacterId c,
                                          const std::string& signal) {
  throw Error(e.code(),
              std::string(to_string(c)) + "." + signal + ": " + e.what());
}

}  // namespace

std::array<ConstraintSet, 2> compile_signals(const InteractionSignalSet& signals,
                                             const CompileContext& ctx) {
  std::array<ConstraintSet, 2> out;
  for (CharacterId c : {CharacterId::I, CharacterId::II}) {
    const int ci = static_cast<int>(c);
    const CharacterSignals& sig = signals.of(c);
    ConstraintSet& cs = out[ci];

    std::optional<TrajectoryConstraint> head_constraint;

    if (sig.gaze) {
      double onset = 0.0;
      try {
        onset = resolve_word_timestamp(sig.gaze->trigger_word, ctx.words,
                                       ctx.window_start_s, ctx.window_end_s);
      } catch (const Error& e) {
        rethrow_with_provenance(e, c, "gaze");
      }
      head_constraint = gaze_trajectory(
          ctx.poses[ci], ctx.head_z(c), ctx.poses[1 - ci], ctx.head_z(other(c)),
          onset, sig.gaze->duration_s, ctx.skeleton, ctx.window_start_s, ctx.frames);
    }

    if (sig.sync && sig.sync->responder == c) {
      double onset = 0.0;
      try {
        onset = resolve_word_timestamp(sig.sync->trigger_word, ctx.words,
                                       ctx.window_start_s, ctx.window_end_s);
      } catch (const Error& e) {
        rethrow_with_provenance(e, c, "sync");
      }
      if (sig.sync->kind == SyncSignal::Kind::meshing) {
        TrajectoryConstraint nod =
            nod_trajectory(onset, ctx.skeleton, ctx.nod, ctx.window_start_s, ctx.frames);
        if (head_constraint)
          merge_nod_into_head(*head_constraint, nod);
        else
          head_constraint = std::move(nod);
      } else {
        const MotionSegment* initiator =
            ctx.prev_segments[static_cast<int>(sig.sync->initiator)];
        const MotionSegment* own = ctx.prev_segments[ci];
        if (initiator == nullptr || own == nullptr)
          fail(Err::MissingSource, std::string(to_string(c)) +
                                       ".sync: no previous round motion to imitate");
        cs.similarity = imitation_constraint(*initiator, onset, *own, ctx.skeleton,
                                             ctx.window_start_s, ctx.frames,
                                             ctx.similarity_cutoff);
      }
    }

    if (head_constraint) cs.trajectory.push_back(std::move(*head_constraint));

    if (sig.spatial) {
      Vec2 dp{0.0, 0.0};
      if (sig.spatial->move_dist_cm > 0.0)
        dp = prox::displacement_to_world(ctx.poses[ci].heading,
                                         sig.spatial->move_angle_deg,
                                         sig.spatial->move_dist_cm / 100.0);
      double dh = 0.0;
      if (sig.spatial->bearing_partner) {
        const Vec2 own_new = ctx.poses[ci].position + dp;
        const Vec2 to_partner = ctx.poses[1 - ci].position - own_new;
        if (to_partner.norm() > 1e-9) {
          const double want = prox::clock_to_angle(*sig.spatial->bearing_partner);
          const double required =
              rot::wrap_pi(std::atan2(to_partner.y, to_partner.x) - want);
          dh = rot::wrap_pi(required - ctx.poses[ci].heading);
        }
      }
      if (dp.norm() > 1e-9 || std::abs(dh) > 1e-9) {
        auto roots = root_targets(ctx.poses[ci], ctx.root_z[ci], dp, dh, ctx.frames,
                                  ctx.skeleton);
        for (auto& r : roots) cs.trajectory.push_back(std::move(r));
        cs.next_state = MotionState::walk;
      }
    }

    cs.validate(ctx.frames, ctx.skeleton.frame_width());
  }
  return out;
}

nlohmann::ordered_json constraint_set_to_json(const ConstraintSet& cs) {
  nlohmann::ordered_json j;
  j["trajectory"] = nlohmann::ordered_json::array();
  for (const auto& c : cs.trajectory) {
    nlohmann::ordered_json t;
    t["group"] = c.group;
    t["selector"] = c.selector;
    auto rows = nlohmann::ordered_json::array();
    auto mrows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < c.targets.rows; ++r) {
      auto row = nlohmann::ordered_json::array();
      auto mrow = nlohmann::ordered_json::array();
      for (std::size_t k = 0; k < c.targets.cols; ++k) {
        row.push_back(c.targets(r, k));
        mrow.push_back(static_cast<int>(c.mask(r, k)));
      }
      rows.push_back(row);
      mrows.push_back(mrow);
    }
    t["targets"] = rows;
    t["mask"] = mrows;
    j["trajectory"].push_back(t);
  }
  if (cs.similarity) {
    nlohmann::ordered_json s;
    s["selector"] = cs.similarity->selector;
    s["cutoff_step"] = cs.similarity->cutoff_step;
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < cs.similarity->target.rows; ++r) {
      auto row = nlohmann::ordered_json::array();
      for (std::size_t k = 0; k < cs.similarity->target.cols; ++k)
        row.push_back(cs.similarity->target(r, k));
      rows.push_back(row);
    }
    s["target"] = rows;
    j["similarity"] = s;
  } else {
    j["similarity"] = nullptr;
  }
  j["next_state"] = cs.next_state ? nlohmann::ordered_json(to_string(*cs.next_state))
                                  : nlohmann::ordered_json(nullptr);
  return j;
}

}  // namespace duet
