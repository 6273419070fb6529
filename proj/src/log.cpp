#include "webseq/log.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <istream>
#include <sstream>

namespace webseq {

namespace {

const char* kMonths[12] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                           "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

int month_index(std::string_view name) {
  for (int m = 0; m < 12; ++m) {
    if (name.size() == 3 && strncasecmp(name.data(), kMonths[m], 3) == 0) return m;
  }
  return -1;
}

// Whitespace tokenizer that keeps a bracketed [..] group as one token
// (brackets stripped), so the CLF date with its timezone stays intact.
std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    if (line[i] == '[') {
      std::size_t close = line.find(']', i);
      if (close == std::string_view::npos) throw MalformedLine("unterminated '[' group");
      out.emplace_back(line.substr(i + 1, close - i - 1));
      i = close + 1;
    } else {
      std::size_t end = i;
      while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
      out.emplace_back(line.substr(i, end - i));
      i = end;
    }
  }
  return out;
}

long long parse_int(const std::string& tok, const char* what) {
  if (tok == "-") return 0;  // common placeholder for missing byte counts
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw MalformedLine(std::string(what) + " is not an integer: '" + tok + "'");
  }
  if (pos != tok.size()) throw MalformedLine(std::string(what) + " is not an integer: '" + tok + "'");
  return v;
}

double parse_double(const std::string& tok, const char* what) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw MalformedLine(std::string(what) + " is not a number: '" + tok + "'");
  }
  if (pos != tok.size()) throw MalformedLine(std::string(what) + " is not a number: '" + tok + "'");
  return v;
}

// "11/Jun/2011:12:25:06 +0000" -> epoch seconds.
double parse_clf_date(const std::string& tok) {
  std::tm tm{};
  char mon[4] = {0};
  int day = 0, year = 0, hh = 0, mm = 0, ss = 0;
  char zone_sign = '+';
  int zone = 0;
  int n = std::sscanf(tok.c_str(), "%d/%3s/%d:%d:%d:%d %c%d", &day, mon, &year, &hh, &mm, &ss,
                      &zone_sign, &zone);
  if (n < 6) throw MalformedLine("bad date: '" + tok + "'");
  int m = month_index(mon);
  if (m < 0) throw MalformedLine("bad month: '" + tok + "'");
  tm.tm_mday = day;
  tm.tm_mon = m;
  tm.tm_year = year - 1900;
  tm.tm_hour = hh;
  tm.tm_min = mm;
  tm.tm_sec = ss;
  std::time_t t = timegm(&tm);
  if (t == static_cast<std::time_t>(-1)) throw MalformedLine("unrepresentable date: '" + tok + "'");
  long off = (zone / 100) * 3600L + (zone % 100) * 60L;
  if (n == 8 && zone_sign == '-') off = -off;
  if (n < 8) off = 0;
  return static_cast<double>(t) - static_cast<double>(off);
}

std::string render_clf_date(double ts) {
  std::time_t t = static_cast<std::time_t>(ts);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "[%02d/%s/%04d:%02d:%02d:%02d +0000]", tm.tm_mday,
                kMonths[tm.tm_mon], tm.tm_year + 1900, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

std::string ensure_scheme(std::string url) {
  if (url.rfind("http://", 0) == 0 || url.rfind("https://", 0) == 0) return url;
  return "http://" + url;
}

// Split an absolute URL into (scheme://host, /path?query) for rendering.
std::pair<std::string, std::string> split_url(const std::string& url) {
  std::size_t scheme = url.find("://");
  std::size_t path = scheme == std::string::npos ? url.find('/') : url.find('/', scheme + 3);
  if (path == std::string::npos) return {url, ""};
  return {url.substr(0, path), url.substr(path)};
}

constexpr std::string_view kProxyPrefix = "web-proxy, debug, packet";

LogRecord parse_clf(std::string_view line, bool extended) {
  auto toks = tokenize(line);
  const std::size_t want = extended ? 9 : 8;
  if (toks.size() != want)
    throw MalformedLine("expected " + std::to_string(want) + " fields, got " +
                        std::to_string(toks.size()));
  LogRecord rec;
  rec.client_ip = toks[0];
  rec.timestamp = parse_clf_date(toks[2]);
  if (rec.timestamp < 0) throw MalformedLine("pre-epoch date: '" + toks[2] + "'");
  rec.method = toks[3];
  std::string file = toks[4] == "-" ? "" : toks[4];
  rec.url = ensure_scheme(toks[1]) + file;
  rec.status = static_cast<int>(parse_int(toks[6], "status"));
  rec.bytes = parse_int(toks[7], "bytes");
  if (rec.bytes < 0) throw MalformedLine("negative byte count");
  if (extended) rec.referrer_ip = toks[8] == "-" ? "" : toks[8];
  return rec;
}

// Figure-4 shaped squid-like proxy line:
//   web-proxy, debug, packet EPOCH DURATION IP CODE/STATUS BYTES METHOD URL -
//   HIERARCHY/HOST MIME in DATE TIME from REFERRER_IP
LogRecord parse_proxy(std::string_view line) {
  if (line.rfind(kProxyPrefix, 0) != 0) throw MalformedLine("missing proxy prefix");
  auto toks = tokenize(line.substr(kProxyPrefix.size()));
  if (toks.size() != 15) throw MalformedLine("expected 15 proxy fields, got " +
                                             std::to_string(toks.size()));
  if (toks[10] != "in" || toks[13] != "from")
    throw MalformedLine("missing 'in'/'from' markers");
  LogRecord rec;
  rec.timestamp = parse_double(toks[0], "epoch");
  if (rec.timestamp < 0) throw MalformedLine("negative epoch");
  parse_int(toks[1], "duration");  // parsed for validation, then discarded
  rec.client_ip = toks[2];
  std::size_t slash = toks[3].find('/');
  if (slash == std::string::npos) throw MalformedLine("bad cache-code/status: '" + toks[3] + "'");
  rec.status = static_cast<int>(parse_int(toks[3].substr(slash + 1), "status"));
  rec.bytes = parse_int(toks[4], "bytes");
  if (rec.bytes < 0) throw MalformedLine("negative byte count");
  rec.method = toks[5];
  rec.url = ensure_scheme(toks[6]);
  rec.content_type = toks[9] == "-" ? "" : toks[9];
  rec.referrer_ip = toks[14] == "-" ? "" : toks[14];
  return rec;
}

std::string proxy_datetime(double ts) {
  std::time_t t = static_cast<std::time_t>(ts);
  std::tm tm{};
  gmtime_r(&t, &tm);
  int centis = static_cast<int>((ts - static_cast<double>(t)) * 100.0);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%02d-%s %d:%d:%d.%02d", tm.tm_mday, kMonths[tm.tm_mon],
                tm.tm_hour, tm.tm_min, tm.tm_sec, centis);
  return buf;
}

// Lowercased extension of the URL's final path segment; empty if none.
std::string path_extension(const std::string& url) {
  std::size_t scheme = url.find("://");
  std::size_t path = scheme == std::string::npos ? url.find('/') : url.find('/', scheme + 3);
  if (path == std::string::npos) return "";
  std::string p = url.substr(path);
  std::size_t cut = p.find_first_of("?#");
  if (cut != std::string::npos) p.resize(cut);
  std::size_t seg = p.rfind('/');
  std::string last = seg == std::string::npos ? p : p.substr(seg + 1);
  std::size_t dot = last.rfind('.');
  if (dot == std::string::npos || dot + 1 == last.size()) return dot == std::string::npos ? "" : ".";
  std::string ext = last.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

std::array<int, 4> ip_key(const std::string& ip) {
  std::array<int, 4> k{-1, -1, -1, -1};
  int a, b, c, d;
  if (std::sscanf(ip.c_str(), "%d.%d.%d.%d", &a, &b, &c, &d) == 4) k = {a, b, c, d};
  return k;
}

}  // namespace

const char* format_name(LogFormat f) {
  switch (f) {
    case LogFormat::CLF: return "clf";
    case LogFormat::ECLF: return "eclf";
    case LogFormat::PROXY: return "proxy";
    case LogFormat::SESSIONS: return "sessions";
    case LogFormat::MSNBC: return "msnbc";
  }
  return "?";
}

LogFormat parse_format(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "clf") return LogFormat::CLF;
  if (s == "eclf") return LogFormat::ECLF;
  if (s == "proxy") return LogFormat::PROXY;
  if (s == "sessions") return LogFormat::SESSIONS;
  if (s == "msnbc") return LogFormat::MSNBC;
  throw UnsupportedFormat("'" + s + "'");
}

LogRecord parse_line(std::string_view line, LogFormat format) {
  if (line.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw MalformedLine("empty line");
  switch (format) {
    case LogFormat::CLF: return parse_clf(line, false);
    case LogFormat::ECLF: return parse_clf(line, true);
    case LogFormat::PROXY: return parse_proxy(line);
    default:
      throw UnsupportedFormat(std::string(format_name(format)) + " is not a log-line format");
  }
}

std::string render_line(const LogRecord& rec, LogFormat format) {
  std::ostringstream out;
  auto [base, file] = split_url(rec.url);
  switch (format) {
    case LogFormat::CLF:
    case LogFormat::ECLF:
      out << rec.client_ip << ' ' << base << ' ' << render_clf_date(rec.timestamp) << ' '
          << rec.method << ' ' << (file.empty() ? "-" : file) << " HTTP/1.1 " << rec.status << ' '
          << rec.bytes;
      if (format == LogFormat::ECLF)
        out << ' ' << (rec.referrer_ip.empty() ? "-" : rec.referrer_ip);
      return out.str();
    case LogFormat::PROXY: {
      char epoch[32];
      std::snprintf(epoch, sizeof(epoch), "%.3f", rec.timestamp);
      out << kProxyPrefix << ' ' << epoch << " 0 " << rec.client_ip << " TCP_MISS/" << rec.status
          << ' ' << rec.bytes << ' ' << rec.method << ' ' << rec.url << " - DIRECT/- "
          << (rec.content_type.empty() ? "-" : rec.content_type) << " in "
          << proxy_datetime(rec.timestamp) << " from "
          << (rec.referrer_ip.empty() ? "-" : rec.referrer_ip);
      return out.str();
    }
    default:
      throw UnsupportedFormat(std::string(format_name(format)) + " is not a log-line format");
  }
}

std::vector<LogRecord> parse_log(std::istream& in, LogFormat format, ParseStats* stats) {
  std::vector<LogRecord> out;
  ParseStats local;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    ++local.lines;
    try {
      out.push_back(parse_line(line, format));
      ++local.parsed;
    } catch (const MalformedLine&) {
      ++local.malformed;
    }
  }
  if (stats) *stats = local;
  return out;
}

std::vector<LogRecord> parse_log_file(const std::string& path, LogFormat format,
                                      ParseStats* stats) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open log file: " + path);
  return parse_log(in, format, stats);
}

Denylist load_denylist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open denylist: " + path);
  Denylist deny;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n' || line.back() == ' '))
      line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    deny.insert(line);
  }
  return deny;
}

bool is_page_record(const LogRecord& rec) {
  std::string ext = path_extension(rec.url);
  bool page_ext = ext.empty() || ext == "htm" || ext == "html" || ext == "xhtml" ||
                  ext == "php" || ext == "jsp";
  bool text_type = rec.content_type.empty() || rec.content_type.rfind("text/", 0) == 0;
  return page_ext && text_type;
}

bool record_order(const LogRecord& a, const LogRecord& b) {
  auto ka = ip_key(a.client_ip);
  auto kb = ip_key(b.client_ip);
  if (ka != kb) return ka < kb;
  if (a.client_ip != b.client_ip) return a.client_ip < b.client_ip;
  return a.timestamp < b.timestamp;
}

std::vector<LogRecord> clean(std::vector<LogRecord> records, const Denylist& denylist) {
  std::erase_if(records, [&](const LogRecord& r) {
    return !is_page_record(r) || denylist.count(r.client_ip) > 0;
  });
  std::sort(records.begin(), records.end(), [](const LogRecord& a, const LogRecord& b) {
    if (record_order(a, b)) return true;
    if (record_order(b, a)) return false;
    return a.url < b.url;  // deterministic order among equal (ip, ts)
  });
  records.erase(std::unique(records.begin(), records.end(),
                            [](const LogRecord& a, const LogRecord& b) {
                              return a.client_ip == b.client_ip && a.timestamp == b.timestamp &&
                                     a.url == b.url;
                            }),
                records.end());
  return records;
}

}  // namespace webseq
