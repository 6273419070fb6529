#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "webseq/errors.hpp"
#include "webseq/log.hpp"

namespace webseq {

/// Bijective URL <-> page-id table; ids are contiguous from 1.
class EncodingTable {
public:
  /// Id of url, allocating the next id if unseen.
  int encode(const std::string& url);
  /// Url for an id already in the table. Throws UnknownId otherwise.
  const std::string& decode(int id) const;
  bool contains_url(const std::string& url) const { return index_.count(url) > 0; }
  bool contains_id(int id) const { return id >= 1 && id <= static_cast<int>(urls_.size()); }
  int size() const { return static_cast<int>(urls_.size()); }
  bool empty() const { return urls_.empty(); }

private:
  std::vector<std::string> urls_;  // urls_[id - 1]
  std::unordered_map<std::string, int> index_;
};

struct PageEvent {
  int page_id = 0;
  double timestamp = 0.0;
  bool operator==(const PageEvent&) const = default;
};

struct Session {
  std::int64_t session_id = 0;
  std::vector<PageEvent> events;  // non-empty, timestamps non-decreasing
  bool operator==(const Session&) const = default;
};

struct UserSequence {
  std::string user;  // IP or synthetic id
  std::vector<Session> sessions;
  bool operator==(const UserSequence&) const = default;
};

/// The per-user session database. `synthetic_timestamps` is true when the
/// event times are fabricated placeholders (MSNBC, SESSIONS files without
/// explicit times); cyclic analysis refuses such databases.
struct SessionDatabase {
  std::vector<UserSequence> users;
  EncodingTable table;  // may be empty for id-only inputs
  bool synthetic_timestamps = false;
};

/// Split cleaned, (ip, timestamp)-sorted records into sessions: a new session
/// starts on every IP change and whenever the gap to the user's previous
/// record exceeds gap_threshold_s. Session ids are globally unique and
/// increase in scan order; URLs are encoded in first-appearance order.
/// Throws UnsortedInput if the records violate the clean() ordering.
SessionDatabase sessionize(const std::vector<LogRecord>& records, double gap_threshold_s = 900.0);

/// Load an already-sequenced database.
///   MSNBC:    one user per line ("u<lineno>"); every integer becomes a
///             single-event session with synthetic timestamps 0,1,2,...
///   SESSIONS: canonical text form, one line per user:
///               user<TAB>session(;session)*   session = event(,event)*
///               event = page_id | page_id@epoch_seconds
///             Timestamps are all-or-nothing per file.
/// Throws MalformedLine / EmptyFile / UnsupportedFormat.
SessionDatabase load_sequences(std::istream& in, LogFormat format);
SessionDatabase load_sequences_file(const std::string& path, LogFormat format);

/// Emit the SESSIONS canonical form. Timestamps are written (at millisecond
/// precision) only when the database carries real ones. The URL table is not
/// part of this format.
std::string serialize_sessions(const SessionDatabase& db);

/// Structural equality used by the round-trip laws: users, sessions, events
/// and the synthetic flag; the URL table is ignored.
bool same_sessions(const SessionDatabase& a, const SessionDatabase& b);

std::size_t total_sessions(const SessionDatabase& db);
std::size_t total_events(const SessionDatabase& db);

}  // namespace webseq
