#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "webseq/errors.hpp"

namespace webseq {

/// Input formats accepted by the toolkit. CLF/ECLF/PROXY are raw log-line
/// formats; SESSIONS and MSNBC are already-sequenced formats handled by
/// load_sequences, not by parse_line.
enum class LogFormat { CLF, ECLF, PROXY, SESSIONS, MSNBC };

const char* format_name(LogFormat f);
LogFormat parse_format(std::string_view name);  // throws UnsupportedFormat

/// One normalized web-log entry.
struct LogRecord {
  std::string client_ip;    // dotted quad
  double timestamp = 0.0;   // seconds since epoch, fractional allowed
  std::string method;       // GET, POST, ...
  std::string url;          // absolute, always scheme-prefixed
  int status = 0;
  long long bytes = 0;      // >= 0
  std::string content_type; // MIME type, may be empty
  std::string referrer_ip;  // dotted quad, may be empty

  bool operator==(const LogRecord&) const = default;
};

/// Parse one raw log line. Throws MalformedLine on field count/type
/// mismatches and UnsupportedFormat when given SESSIONS/MSNBC.
LogRecord parse_line(std::string_view line, LogFormat format);

/// Re-render a record in the given format's field order. Fields the format
/// discards (proxy duration, human-readable date) are emitted as
/// placeholders; parse_line(render_line(r, f), f) recovers r.
std::string render_line(const LogRecord& rec, LogFormat format);

/// Bulk parse: malformed lines are skipped and counted, never fatal.
struct ParseStats {
  std::size_t lines = 0;
  std::size_t parsed = 0;
  std::size_t malformed = 0;
};
std::vector<LogRecord> parse_log(std::istream& in, LogFormat format, ParseStats* stats = nullptr);
std::vector<LogRecord> parse_log_file(const std::string& path, LogFormat format,
                                      ParseStats* stats = nullptr);

/// Crawler/client denylist: entries are matched verbatim against client_ip.
/// Lines starting with '#' and blank lines are ignored.
using Denylist = std::set<std::string>;
Denylist load_denylist(const std::string& path);

/// Sort by (client_ip, timestamp), drop duplicate (ip, timestamp, url)
/// triples, and keep only page-like records: URL path extension in
/// {htm, html, xhtml, php, jsp} or no extension at all, AND content type
/// empty or "text/*". Idempotent and total.
std::vector<LogRecord> clean(std::vector<LogRecord> records, const Denylist& denylist = {});

/// The keep-predicate used by clean, exposed so it can be re-checked.
bool is_page_record(const LogRecord& rec);

/// Ordering used by clean: dotted-quad-aware IP order, then timestamp.
bool record_order(const LogRecord& a, const LogRecord& b);

}  // namespace webseq
