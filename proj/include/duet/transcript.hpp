#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "duet/motion.hpp"

namespace duet {

/// One recognized word with its utterance interval in seconds.
struct TranscriptWord {
  std::string word;
  double start = 0.0;
  double end = 0.0;
  CharacterId speaker = CharacterId::I;
};

/// Free-form scene hints carried alongside the word stream.
struct SceneHints {
  std::optional<std::string> scenario;
  std::optional<std::string> relationship;
  std::optional<std::string> emotion;
  std::map<std::string, std::string> characters;  // "I"/"II" -> description
};

struct TranscriptFile {
  std::vector<TranscriptWord> words;
  SceneHints hints;

  double duration() const;  // end of the last word, 0 when empty
  std::vector<TranscriptWord> words_in_window(double start_s, double end_s) const;
};

/// Checks timestamp sanity and per-speaker monotone, non-overlapping words.
void validate_transcript(const TranscriptFile& file);

/// Line-delimited JSON records (schema "transcript/1"): one header line, then
/// one word record per line. ParseError/ValidationError carry the line number.
TranscriptFile load_transcript(const std::string& path);
TranscriptFile parse_transcript(const std::string& text);
std::string serialize_transcript(const TranscriptFile& file);

}  // namespace duet
