#include "webseq/sessions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace webseq {

int EncodingTable::encode(const std::string& url) {
  auto it = index_.find(url);
  if (it != index_.end()) return it->second;
  urls_.push_back(url);
  int id = static_cast<int>(urls_.size());
  index_.emplace(url, id);
  return id;
}

const std::string& EncodingTable::decode(int id) const {
  if (!contains_id(id)) throw UnknownId(std::to_string(id));
  return urls_[static_cast<std::size_t>(id) - 1];
}

SessionDatabase sessionize(const std::vector<LogRecord>& records, double gap_threshold_s) {
  if (gap_threshold_s <= 0) throw Error("gap threshold must be positive");
  SessionDatabase db;
  db.synthetic_timestamps = false;
  std::int64_t next_session_id = 1;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const LogRecord& r = records[i];
    if (i > 0) {
      const LogRecord& prev = records[i - 1];
      if (record_order(r, prev))
        throw UnsortedInput("record " + std::to_string(i) + " out of (ip, timestamp) order");
    }
    bool new_user = db.users.empty() || db.users.back().user != r.client_ip;
    if (new_user) db.users.push_back(UserSequence{r.client_ip, {}});
    UserSequence& u = db.users.back();
    bool new_session = new_user;
    if (!new_session) {
      double gap = r.timestamp - u.sessions.back().events.back().timestamp;
      new_session = gap > gap_threshold_s;
    }
    if (new_session) u.sessions.push_back(Session{next_session_id++, {}});
    u.sessions.back().events.push_back(PageEvent{db.table.encode(r.url), r.timestamp});
  }
  return db;
}

namespace {

std::string format_ts(double ts) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3f", ts);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

int parse_page_id(const std::string& tok) {
  std::size_t pos = 0;
  int id = 0;
  try {
    id = std::stoi(tok, &pos);
  } catch (const std::exception&) {
    throw MalformedLine("bad page id '" + tok + "'");
  }
  if (pos != tok.size() || id < 0) throw MalformedLine("bad page id '" + tok + "'");
  return id;
}

SessionDatabase load_msnbc(std::istream& in) {
  SessionDatabase db;
  db.synthetic_timestamps = true;
  std::int64_t next_session_id = 1;
  std::string line;
  std::size_t data_line = 0;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty() || line[0] == '%' || line[0] == '#') continue;
    ++data_line;
    UserSequence u;
    u.user = "u" + std::to_string(data_line);
    std::istringstream toks(line);
    std::string tok;
    double t = 0;
    while (toks >> tok) {
      int id = parse_page_id(tok);
      Session s;
      s.session_id = next_session_id++;
      s.events.push_back(PageEvent{id, t});
      u.sessions.push_back(std::move(s));
      t += 1.0;
    }
    if (!u.sessions.empty()) db.users.push_back(std::move(u));
  }
  if (db.users.empty()) throw EmptyFile("no sequences found");
  return db;
}

SessionDatabase load_sessions_text(std::istream& in) {
  SessionDatabase db;
  std::int64_t next_session_id = 1;
  int with_ts = -1;  // -1 undecided, 0 bare, 1 timestamped
  std::set<std::string> seen_users;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw MalformedLine("line " + std::to_string(lineno) + ": missing user<TAB>sessions");
    UserSequence u;
    u.user = line.substr(0, tab);
    if (u.user.empty()) throw MalformedLine("line " + std::to_string(lineno) + ": empty user");
    if (!seen_users.insert(u.user).second)
      throw MalformedLine("line " + std::to_string(lineno) + ": duplicate user '" + u.user + "'");
    double synth_t = 0;
    double prev_t = -1;
    for (const std::string& sess_text : split(line.substr(tab + 1), ';')) {
      if (sess_text.empty())
        throw MalformedLine("line " + std::to_string(lineno) + ": empty session");
      Session s;
      s.session_id = next_session_id++;
      for (const std::string& ev_text : split(sess_text, ',')) {
        PageEvent ev;
        std::size_t at = ev_text.find('@');
        if (at == std::string::npos) {
          if (with_ts == 1)
            throw MalformedLine("line " + std::to_string(lineno) +
                                ": timestamps must be all-or-nothing per file");
          with_ts = 0;
          ev.page_id = parse_page_id(ev_text);
          ev.timestamp = synth_t;
        } else {
          if (with_ts == 0)
            throw MalformedLine("line " + std::to_string(lineno) +
                                ": timestamps must be all-or-nothing per file");
          with_ts = 1;
          ev.page_id = parse_page_id(ev_text.substr(0, at));
          std::size_t pos = 0;
          std::string ts_text = ev_text.substr(at + 1);
          try {
            ev.timestamp = std::stod(ts_text, &pos);
          } catch (const std::exception&) {
            throw MalformedLine("line " + std::to_string(lineno) + ": bad timestamp '" + ts_text +
                                "'");
          }
          if (pos != ts_text.size() || ev.timestamp < 0)
            throw MalformedLine("line " + std::to_string(lineno) + ": bad timestamp '" + ts_text +
                                "'");
        }
        if (ev.timestamp < prev_t)
          throw MalformedLine("line " + std::to_string(lineno) +
                              ": timestamps must be non-decreasing within a user");
        prev_t = ev.timestamp;
        synth_t += 1.0;
        s.events.push_back(ev);
      }
      u.sessions.push_back(std::move(s));
    }
    db.users.push_back(std::move(u));
  }
  if (db.users.empty()) throw EmptyFile("no sequences found");
  db.synthetic_timestamps = (with_ts != 1);
  return db;
}

}  // namespace

SessionDatabase load_sequences(std::istream& in, LogFormat format) {
  switch (format) {
    case LogFormat::MSNBC: return load_msnbc(in);
    case LogFormat::SESSIONS: return load_sessions_text(in);
    default:
      throw UnsupportedFormat(std::string(format_name(format)) +
                              " is not a sequence format; run ingest/sessionize first");
  }
}

SessionDatabase load_sequences_file(const std::string& path, LogFormat format) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open sequence file: " + path);
  return load_sequences(in, format);
}

std::string serialize_sessions(const SessionDatabase& db) {
  std::ostringstream out;
  for (const UserSequence& u : db.users) {
    out << u.user << '\t';
    for (std::size_t si = 0; si < u.sessions.size(); ++si) {
      if (si) out << ';';
      const Session& s = u.sessions[si];
      for (std::size_t ei = 0; ei < s.events.size(); ++ei) {
        if (ei) out << ',';
        out << s.events[ei].page_id;
        if (!db.synthetic_timestamps) out << '@' << format_ts(s.events[ei].timestamp);
      }
    }
    out << '\n';
  }
  return out.str();
}

bool same_sessions(const SessionDatabase& a, const SessionDatabase& b) {
  return a.synthetic_timestamps == b.synthetic_timestamps && a.users == b.users;
}

std::size_t total_sessions(const SessionDatabase& db) {
  std::size_t n = 0;
  for (const auto& u : db.users) n += u.sessions.size();
  return n;
}

std::size_t total_events(const SessionDatabase& db) {
  std::size_t n = 0;
  for (const auto& u : db.users)
    for (const auto& s : u.sessions) n += s.events.size();
  return n;
}

}  // namespace webseq
