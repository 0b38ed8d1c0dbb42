#include "duet/transcript.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "duet/error.hpp"
#include "json.hpp"

namespace duet {

using nlohmann::json;

double TranscriptFile::duration() const {
  double d = 0.0;
  for (const auto& w : words) d = std::max(d, w.end);
  return d;
}

std::vector<TranscriptWord> TranscriptFile::words_in_window(double start_s,
                                                            double end_s) const {
  std::vector<TranscriptWord> out;
  for (const auto& w : words)
    if (w.start >= start_s && w.start < end_s) out.push_back(w);
  return out;
}

void validate_transcript(const TranscriptFile& file) {
  if (file.words.empty()) fail(Err::ValidationError, "transcript has no words");
  double last_end[2] = {-1.0, -1.0};
  for (std::size_t i = 0; i < file.words.size(); ++i) {
    const auto& w = file.words[i];
    if (w.word.empty())
      fail(Err::ValidationError, "record " + std::to_string(i) + ": empty word");
    if (!(w.start >= 0.0) || !(w.end > w.start))
      fail(Err::ValidationError,
           "record " + std::to_string(i) + ": need 0 <= start < end");
    double& prev = last_end[static_cast<int>(w.speaker)];
    if (w.start < prev)
      fail(Err::ValidationError, "record " + std::to_string(i) +
                                     ": speaker words overlap or run backwards");
    prev = w.end;
  }
}

static CharacterId speaker_from_json(const json& j, int line) {
  const std::string s = j.get<std::string>();
  if (s == "I") return CharacterId::I;
  if (s == "II") return CharacterId::II;
  fail(Err::ParseError, "line " + std::to_string(line) + ": speaker must be I or II");
}

TranscriptFile parse_transcript(const std::string& text) {
  TranscriptFile file;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail(Err::ParseError, "line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!saw_header) {
      if (!j.is_object() || j.value("schema", "") != "transcript/1")
        fail(Err::UnsupportedVersion,
             "line " + std::to_string(lineno) + ": expected schema 'transcript/1'");
      saw_header = true;
      if (j.contains("scene_hints")) {
        const json& h = j["scene_hints"];
        if (h.contains("scenario")) file.hints.scenario = h["scenario"].get<std::string>();
        if (h.contains("relationship"))
          file.hints.relationship = h["relationship"].get<std::string>();
        if (h.contains("emotion")) file.hints.emotion = h["emotion"].get<std::string>();
        if (h.contains("characters"))
          for (auto it = h["characters"].begin(); it != h["characters"].end(); ++it)
            file.hints.characters[it.key()] = it.value().get<std::string>();
      }
      continue;
    }
    try {
      TranscriptWord w;
      w.word = j.at("word").get<std::string>();
      w.start = j.at("start").get<double>();
      w.end = j.at("end").get<double>();
      w.speaker = speaker_from_json(j.at("speaker"), lineno);
      file.words.push_back(std::move(w));
    } catch (const json::exception& e) {
      fail(Err::ParseError, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!saw_header) fail(Err::ValidationError, "empty transcript file");
  validate_transcript(file);
  return file;
}

TranscriptFile load_transcript(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::ParseError, "cannot open transcript file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_transcript(ss.str());
}

std::string serialize_transcript(const TranscriptFile& file) {
  std::ostringstream out;
  json header = {{"schema", "transcript/1"}};
  json hints = json::object();
  if (file.hints.scenario) hints["scenario"] = *file.hints.scenario;
  if (file.hints.relationship) hints["relationship"] = *file.hints.relationship;
  if (file.hints.emotion) hints["emotion"] = *file.hints.emotion;
  if (!file.hints.characters.empty()) {
    json chars = json::object();
    for (const auto& [k, v] : file.hints.characters) chars[k] = v;
    hints["characters"] = chars;
  }
  if (!hints.empty()) header["scene_hints"] = hints;
  out << header.dump() << "\n";
  for (const auto& w : file.words) {
    json j = {{"word", w.word},
              {"start", w.start},
              {"end", w.end},
              {"speaker", to_string(w.speaker)}};
    out << j.dump() << "\n";
  }
  return out.str();
}

}  // namespace duet
