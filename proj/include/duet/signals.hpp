#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "duet/motion.hpp"
#include "duet/proxemics.hpp"

#include "json.hpp"

namespace duet {

/// Scene understanding distilled from the dialogue.
struct SceneContext {
  std::string scenario;
  std::string relationship;
  std::string emotion;
  std::map<std::string, std::string> character_settings;  // "I"/"II" -> text
};

/// Spatial adjustment for one character: optional formation update, the
/// clock bearing at which the partner should sit in this character's frame,
/// and a movement [clockwise angle in degrees, distance in centimeters].
struct SpatialSignal {
  std::optional<prox::Formation> configuration;
  std::optional<prox::ClockDirection> bearing_partner;
  double move_angle_deg = 0.0;
  double move_dist_cm = 0.0;
};

struct SyncSignal {
  enum class Kind { matching, meshing };
  Kind kind = Kind::meshing;
  CharacterId initiator = CharacterId::I;
  CharacterId responder = CharacterId::II;
  std::string trigger_word;
};

struct GazeSignal {
  double duration_s = 1.0;  // (0, 2.5]
  std::string trigger_word;
};

struct CharacterSignals {
  std::optional<SpatialSignal> spatial;
  std::optional<SyncSignal> sync;  // attached to the responder
  std::optional<GazeSignal> gaze;
  bool empty() const { return !spatial && !sync && !gaze; }
};

/// Wire schema "signals/1": validated structured output of one controller
/// round, one slot per character.
struct InteractionSignalSet {
  std::array<CharacterSignals, 2> per_character;

  CharacterSignals& of(CharacterId c) { return per_character[static_cast<int>(c)]; }
  const CharacterSignals& of(CharacterId c) const {
    return per_character[static_cast<int>(c)];
  }
  bool empty() const { return per_character[0].empty() && per_character[1].empty(); }
};

const char* to_string(SyncSignal::Kind k);

/// Parses and validates the wire form; ValidationError lists every violated
/// constraint (gaze duration bound, initiator != responder, distance >= 0,
/// clock ranges, known enum values).
InteractionSignalSet signals_from_json(const nlohmann::json& j);
nlohmann::ordered_json signals_to_json(const InteractionSignalSet& s);

}  // namespace duet
