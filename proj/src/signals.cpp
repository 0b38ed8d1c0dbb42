#include "duet/signals.hpp"

#include <sstream>

#include "duet/error.hpp"

namespace duet {

using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(SyncSignal::Kind k) {
  return k == SyncSignal::Kind::matching ? "matching" : "meshing";
}

namespace {

class Violations {
 public:
  void add(const std::string& msg) {
    if (!text_.empty()) text_ += "; ";
    text_ += msg;
  }
  void raise_if_any() const {
    if (!text_.empty()) fail(Err::ValidationError, text_);
  }

 private:
  std::string text_;
};

CharacterId character_from_string(const std::string& s, Violations& v,
                                  const std::string& where) {
  if (s == "I") return CharacterId::I;
  if (s == "II") return CharacterId::II;
  v.add(where + ": character must be 'I' or 'II'");
  return CharacterId::I;
}

std::optional<SpatialSignal> parse_spatial(const json& j, const std::string& who,
                                           Violations& v) {
  if (j.is_null()) return std::nullopt;
  SpatialSignal s;
  if (j.contains("configuration") && !j["configuration"].is_null()) {
    try {
      s.configuration = prox::formation_from_string(j["configuration"].get<std::string>());
    } catch (const Error&) {
      v.add(who + ".spatial.configuration: unknown value");
    }
  }
  if (j.contains("bearing_partner") && !j["bearing_partner"].is_null()) {
    const json& b = j["bearing_partner"];
    if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number()) {
      v.add(who + ".spatial.bearing_partner: expected [hour, minute]");
    } else {
      prox::ClockDirection c{b[0].get<int>(), b[1].get<int>()};
      if (c.hour < 1 || c.hour > 12 || c.minute < 0 || c.minute > 59)
        v.add(who + ".spatial.bearing_partner: hour in 1-12, minute in 0-59");
      else
        s.bearing_partner = c;
    }
  }
  if (j.contains("movement") && !j["movement"].is_null()) {
    const json& m = j["movement"];
    if (!m.is_array() || m.size() != 2 || !m[0].is_number() || !m[1].is_number()) {
      v.add(who + ".spatial.movement: expected [angle_deg, dist_cm]");
    } else {
      s.move_angle_deg = m[0].get<double>();
      s.move_dist_cm = m[1].get<double>();
      if (s.move_angle_deg < 0.0 || s.move_angle_deg >= 360.0)
        v.add(who + ".spatial.movement: angle must be in [0, 360)");
      if (s.move_dist_cm < 0.0) v.add(who + ".spatial.movement: distance must be >= 0");
    }
  }
  return s;
}

std::optional<SyncSignal> parse_sync(const json& j, const std::string& who,
                                     Violations& v) {
  if (j.is_null()) return std::nullopt;
  SyncSignal s;
  const std::string kind = j.value("kind", "");
  if (kind == "matching") {
    s.kind = SyncSignal::Kind::matching;
  } else if (kind == "meshing") {
    s.kind = SyncSignal::Kind::meshing;
  } else {
    v.add(who + ".sync.kind: must be 'matching' or 'meshing'");
  }
  if (!j.contains("initiator") || !j.contains("responder")) {
    v.add(who + ".sync: initiator and responder are required");
  } else {
    s.initiator = character_from_string(j["initiator"].get<std::string>(), v,
                                        who + ".sync.initiator");
    s.responder = character_from_string(j["responder"].get<std::string>(), v,
                                        who + ".sync.responder");
    if (j["initiator"] == j["responder"])
      v.add(who + ".sync: initiator must differ from responder");
  }
  s.trigger_word = j.value("trigger_word", "");
  if (s.trigger_word.empty()) v.add(who + ".sync.trigger_word: required");
  return s;
}

std::optional<GazeSignal> parse_gaze(const json& j, const std::string& who,
                                     Violations& v) {
  if (j.is_null()) return std::nullopt;
  GazeSignal g;
  if (j.value("target", "partner") != "partner")
    v.add(who + ".gaze.target: only 'partner' is supported");
  if (!j.contains("duration_s") || !j["duration_s"].is_number()) {
    v.add(who + ".gaze.duration_s: required number");
  } else {
    g.duration_s = j["duration_s"].get<double>();
    if (!(g.duration_s > 0.0) || g.duration_s > 2.5)
      v.add(who + ".gaze.duration_s: must be in (0, 2.5]");
  }
  g.trigger_word = j.value("trigger_word", "");
  if (g.trigger_word.empty()) v.add(who + ".gaze.trigger_word: required");
  return g;
}

}  // namespace

InteractionSignalSet signals_from_json(const json& j) {
  Violations v;
  InteractionSignalSet out;
  if (!j.is_object()) fail(Err::ValidationError, "signal set must be a JSON object");
  if (j.value("schema", "") != "signals/1")
    fail(Err::UnsupportedVersion, "expected schema 'signals/1'");
  for (CharacterId c : {CharacterId::I, CharacterId::II}) {
    const std::string key = to_string(c);
    if (!j.contains(key)) continue;
    const json& slot = j[key];
    if (slot.is_null()) continue;
    CharacterSignals& sig = out.of(c);
    if (slot.contains("spatial")) sig.spatial = parse_spatial(slot["spatial"], key, v);
    if (slot.contains("sync")) sig.sync = parse_sync(slot["sync"], key, v);
    if (slot.contains("gaze")) sig.gaze = parse_gaze(slot["gaze"], key, v);
    if (sig.sync && sig.sync->responder != c)
      v.add(key + ".sync: signal must live in the responder's slot");
  }
  v.raise_if_any();
  return out;
}

ordered_json signals_to_json(const InteractionSignalSet& s) {
  ordered_json out;
  out["schema"] = "signals/1";
  for (CharacterId c : {CharacterId::I, CharacterId::II}) {
    ordered_json slot;
    const CharacterSignals& sig = s.of(c);
    if (sig.spatial) {
      ordered_json sp;
      sp["configuration"] =
          sig.spatial->configuration
              ? ordered_json(prox::to_string(*sig.spatial->configuration))
              : ordered_json(nullptr);
      if (sig.spatial->bearing_partner)
        sp["bearing_partner"] = {sig.spatial->bearing_partner->hour,
                                 sig.spatial->bearing_partner->minute};
      else
        sp["bearing_partner"] = nullptr;
      sp["movement"] = {sig.spatial->move_angle_deg, sig.spatial->move_dist_cm};
      slot["spatial"] = sp;
    } else {
      slot["spatial"] = nullptr;
    }
    if (sig.sync) {
      slot["sync"] = {{"kind", to_string(sig.sync->kind)},
                      {"initiator", to_string(sig.sync->initiator)},
                      {"responder", to_string(sig.sync->responder)},
                      {"trigger_word", sig.sync->trigger_word}};
    } else {
      slot["sync"] = nullptr;
    }
    if (sig.gaze) {
      slot["gaze"] = {{"target", "partner"},
                      {"duration_s", sig.gaze->duration_s},
                      {"trigger_word", sig.gaze->trigger_word}};
    } else {
      slot["gaze"] = nullptr;
    }
    out[to_string(c)] = slot;
  }
  return out;
}

}  // namespace duet
